#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stc/config.hpp"
#include "stc/sim.hpp"

namespace stc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitOutOfRegion = 3;
inline constexpr int kExitInvariant = 4;

/// Where the family comes from: a file, or the default synthesis when no
/// path is given. `m` overrides the window length of either.
struct FamilySource {
  std::optional<std::string> config_path;
  std::optional<std::size_t> m;
};

struct LoadedFamily {
  FamilyFile file;
  TriggerConfig cfg;
  StorageBundle bundle;
  PlantModel plant;
};

LoadedFamily load_family(const FamilySource& source);

/// Empty delay spec means a constant delay of tau_mad.
DelayModel make_delay(const std::string& spec, double tau_mad);

struct RunSummary {
  std::size_t samples = 0;
  double min_interval = 0.0;
  double mean_interval = 0.0;
  double max_interval = 0.0;
  double final_interval = 0.0;
  std::size_t fallbacks = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  std::optional<SimulationFailure> failure;
};

RunSummary summarize(const SimulationResult& result);
void print_summary(std::ostream& out, const RunSummary& summary);
int exit_code(const RunSummary& summary);

/// Norm of (x, e, s, eta).
double hybrid_norm(const HybridState& xi);

/// n points of the scalar region of attraction, evenly spread over
/// (-r, r) with r scaled by `margin`.
std::vector<double> region_samples(const TriggerConfig& cfg, const StorageBundle& bundle,
                                   std::size_t n, double margin = 0.98);

struct SimulateArgs {
  FamilySource family;
  Vec x0{2.0};
  double horizon = 10.0;
  std::string delay;
  std::optional<std::string> out_prefix;
  double flow_step = 0.0;
  std::size_t record_every = 1;
  bool periodic = false;
};

struct CompareArgs {
  FamilySource family;
  Vec x0{2.0};
  double horizon = 10.0;
  std::string delay;
  std::optional<std::string> out_prefix;
  double flow_step = 0.0;
};

struct CompareResult {
  RunSummary stc;
  RunSummary periodic;
  [[nodiscard]] double ratio() const;
};

CompareResult run_compare(const LoadedFamily& family, const CompareArgs& args);

struct ParamgenArgs {
  std::vector<double> eps;
  TriggerSettings settings;
  std::optional<double> roa_reference;
  std::string out_path = "family.toml";
};

struct TmaxArgs {
  FamilySource family;
  /// 1-based; 0 selects the reference set.
  std::size_t set = 0;
  std::size_t points = 200;
  std::optional<std::string> out_path;
};

struct ValidateArgs {
  FamilySource family;
  std::size_t grid_n = 100;
};

struct SweepArgs {
  FamilySource family;
  /// Empty: `count` points spanning the region of attraction.
  std::vector<double> x0;
  std::size_t count = 20;
  double horizon = 30.0;
  std::string delay;
  std::size_t jobs = 0;
  std::optional<std::string> out_prefix;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out);
int cmd_compare(const CompareArgs& args, std::ostream& out);
int cmd_paramgen(const ParamgenArgs& args, std::ostream& out);
int cmd_tmax(const TmaxArgs& args, std::ostream& out);
int cmd_validate(const ValidateArgs& args, std::ostream& out);
int cmd_sweep(const SweepArgs& args, std::ostream& out);

}  // namespace stc::cli
