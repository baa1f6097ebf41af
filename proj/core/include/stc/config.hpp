#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stc/storage.hpp"
#include "stc/trigger.hpp"

namespace stc {

/// Contents of a family file:
///
///   plant = "example_scalar"
///   lambda = 0.2
///   c_x = 4.55
///   tau_mad = 0.0004
///   m = 30
///   horizon_cap = 10
///   phi_step = 0
///
///   [[set]]
///   eps = 0.01
///   gamma0 = ...
///   gamma1 = ...
///   l0 = ...
///   l1 = ...
///   phi0_0 = ...
///   phi1_0 = ...
///   tmax = ...
///
/// The grammar is a subset of TOML: comments, bare keys, numbers, one
/// quoted string and the [[set]] array of tables. The first set is the
/// reference set.
struct FamilyFile {
  std::string plant = "example_scalar";
  TriggerSettings settings;
  std::vector<ParameterSet> sets;
  /// T_max as written; recomputed on load.
  std::vector<double> t_max;

  friend bool operator==(const FamilyFile&, const FamilyFile&) = default;
};

/// Throws ConfigError with the line number on malformed input.
FamilyFile parse_family(std::istream& in);
FamilyFile read_family(const std::string& path);

/// Values are written with 17 significant digits so that reading the file
/// back reproduces them exactly.
void write_family(std::ostream& out, const FamilyFile& family);
void write_family(const std::string& path, const FamilyFile& family);

FamilyFile to_family(const TriggerConfig& cfg, std::string plant = "example_scalar");

/// make_trigger_config on the file's settings and sets.
TriggerConfig to_trigger_config(const FamilyFile& family);

/// Field-wise comparison of the inputs and the cached T_max values.
bool same_config(const TriggerConfig& a, const TriggerConfig& b);

}  // namespace stc
