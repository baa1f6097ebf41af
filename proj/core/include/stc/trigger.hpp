#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stc/phi.hpp"
#include "stc/storage.hpp"

namespace stc {

/// Scalar settings of the self-triggered mechanism.
struct TriggerSettings {
  double lambda = 0.2;
  double c_x = 4.55;
  std::size_t m = 30;
  double tau_mad = 4e-4;
  double horizon_cap = 10.0;
  /// Integration step for the phi tables; <= 0 picks default_phi_step per set.
  double phi_step = 0.0;

  friend bool operator==(const TriggerSettings&, const TriggerSettings&) = default;
};

/// Phi solutions of one parameter set, tabulated far enough to evaluate U_p
/// on every interval the mechanism can choose.
struct SetTables {
  PhiTable phi0;
  PhiTable phi1;
};

/// Frozen configuration of the mechanism. Index 0 of `sets` is the reference
/// set P_1 that provides c_u, t_min and the fallback.
struct TriggerConfig {
  TriggerSettings settings;
  std::vector<ParameterSet> sets;
  double c_u = 0.0;
  double t_min = 0.0;
  std::vector<double> t_max;
  std::vector<bool> cap_bound;
  std::vector<SetTables> tables;

  [[nodiscard]] std::size_t set_count() const { return sets.size(); }
  [[nodiscard]] const ParameterSet& reference() const { return sets.front(); }
  [[nodiscard]] double max_t_max() const;
  [[nodiscard]] std::size_t eta_size() const { return settings.m - 1; }

  /// phi_{ell,p}(tau) from the cached tables.
  [[nodiscard]] double phi(std::size_t set, int ell, double tau) const;
};

/// Builds a config: c_u = gamma_{1,1} phi_{1,1}(0), T_max per set, tables.
/// Throws ConfigError unless lambda in (0,1), c_x > 0, m >= 1, every set is
/// valid, eps_1 > 0 and t_min >= tau_mad.
TriggerConfig make_trigger_config(const TriggerSettings& settings,
                                  std::vector<ParameterSet> sets);

struct TriggerDecision {
  double tau_max = 0.0;
  /// 0-based index into TriggerConfig::sets.
  std::size_t chosen = 0;
  bool fallback = true;
  /// U_chosen right after the sampling jump.
  double u_chosen_plus = 0.0;
  /// Window bound C used for the decision.
  double c = 0.0;
};

/// Chooses the next sampling interval from the state at a sampling instant.
///
/// Every non-reference set p is probed: it is discarded when its post-jump
/// value U_p+ exceeds C or reaches c_x, otherwise its candidate interval is
/// min{(ln C - ln U_p+) / (eps_1 - eps_p), T_max(p)} (just T_max(p) when
/// eps_p >= eps_1 or U_p+ = 0). The largest candidate wins, ties going to
/// the lower index. If nothing survives or the winner is below t_min, the
/// reference set is used with interval t_min. Throws OutOfRegionError when
/// even the fallback cannot keep U_1+ below c_x.
TriggerDecision gamma_trigger(const TriggerConfig& cfg, const StorageBundle& bundle,
                              std::span<const double> x, std::span<const double> e,
                              std::span<const double> eta);

/// Periodic baseline: always (t_min, reference, fallback).
TriggerDecision periodic_trigger(const TriggerConfig& cfg,
                                 const StorageBundle& bundle,
                                 std::span<const double> x,
                                 std::span<const double> e);

/// U_1 after a sampling jump at (x, e): the value appended to the window.
double window_value(const TriggerConfig& cfg, const StorageBundle& bundle,
                    std::span<const double> x, std::span<const double> e);

/// Shift register update (eta_2, ..., eta_{m-1}, window_value(x, e)).
Vec update_eta(const TriggerConfig& cfg, const StorageBundle& bundle,
               std::span<const double> eta, std::span<const double> x,
               std::span<const double> e);

}  // namespace stc
