#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stc/model.hpp"
#include "stc/storage.hpp"
#include "stc/trigger.hpp"

namespace stc {

struct Infeasible {
  double eps = 0.0;
  std::string reason;
};

/// Closed-form minimal gamma for the scalar example: with V = v x^2,
/// f = -x - a3 e, |a3| <= a3_bound, H = |x| and L = a3_bound the storage
/// inequality reduces to
///   (1 - 2v + v eps) x^2 + 2 v a3_bound |x||e| - gamma^2 e^2 <= 0,
/// feasible iff c = 2v - 1 - v eps > 0, with gamma_min = v a3_bound / sqrt(c).
/// The returned set has phi0_init = phi1_init = 0.
std::variant<ParameterSet, Infeasible> synthesize_scalar(
    double eps, double lambda, double v_coeff = example::kVCoeff,
    double a3_bound = example::kA3Bound);

/// What find_phi0 optimises.
struct Phi0Target {
  enum class Kind { max_tmin, feasible };
  Kind kind = Kind::max_tmin;
  /// For `feasible`: c_u of the reference set.
  double c_u = 0.0;
  /// For `max_tmin`: upper bound on gamma_1 phi_1(0), i.e. on c_u.
  std::optional<double> c_u_cap;

  static Phi0Target reference(std::optional<double> c_u_cap = std::nullopt) {
    return {Kind::max_tmin, 0.0, c_u_cap};
  }
  static Phi0Target against(double c_u) { return {Kind::feasible, c_u, std::nullopt}; }
};

struct PhiInit {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double t_max = 0.0;
};

struct PhiSearchOptions {
  /// phi_0(0) candidates: log-spaced in [lo, hi].
  double phi0_lo = 1e-3;
  double phi0_hi = 1e3;
  std::size_t points = 200;
  double horizon_cap = 10.0;
  double step = 0.0;
};

/// Line search over phi_0(0). For each candidate, phi_1(0) is the smallest
/// value keeping gamma_1 phi_1 >= gamma_0 phi_0 on [0, tau_mad] (found by
/// bisection; the phi solutions are ordered in their initial values), raised
/// by a relative margin of 1e-6.
///  - max_tmin: maximise T_max with c_u = gamma_1 phi_1(0) of the set
///    itself, optionally subject to c_u <= c_u_cap.
///  - feasible: maximise T_max for the given c_u subject to
///    gamma_1 phi_1(0) <= c_u.
/// Returns nullopt when no candidate yields T_max >= tau_mad.
std::optional<PhiInit> find_phi0(const ParameterSet& core, double lambda,
                                 double tau_mad, const Phi0Target& target,
                                 const PhiSearchOptions& options = {});

/// The default grid of 22 values of eps in [-50, 0.01].
std::vector<double> default_eps_grid();

struct FamilyOptions {
  TriggerSettings settings;
  double v_coeff = example::kVCoeff;
  double a3_bound = example::kA3Bound;
  PhiSearchOptions search;
  /// When set, the reference set's c_u is capped so that this state lies in
  /// the region of attraction.
  std::optional<double> roa_reference;
};

struct FamilyReport {
  std::vector<Infeasible> discarded;
};

/// Synthesises every eps, discards infeasible ones, picks the largest
/// feasible eps > 0 as the reference set and returns the frozen config.
/// Throws ConfigError when no reference set exists or t_min < tau_mad.
TriggerConfig build_family(const std::vector<double>& eps_list,
                           const FamilyOptions& options,
                           FamilyReport* report = nullptr);

enum class Condition1Check { v_decrease, w_decrease, w_jump_sample, w_jump_update };

std::string_view to_string(Condition1Check check);

struct Condition1Violation {
  std::size_t set = 0;
  int ell = 0;
  Condition1Check check = Condition1Check::v_decrease;
  double x = 0.0;
  double e = 0.0;
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Condition1Report {
  /// First 1000 violations; `failures` counts all of them.
  std::vector<Condition1Violation> violations;
  std::size_t failures = 0;
  std::size_t checks = 0;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

struct Condition1Options {
  std::size_t grid_n = 100;
  /// Number of s values per (x, e) besides s = -e.
  std::size_t s_points = 9;
  double tolerance = 1e-9;
  /// Also check the embedded form f = -x - a3 e at a3 = +-a3_bound.
  std::optional<double> a3_bound = example::kA3Bound;
};

/// Grid check of the storage inequalities for every set of `sets` on the
/// scalar plant's X x E. X is sampled uniformly, E with cubic spacing that
/// concentrates points near e = 0, where the inequality in V is tightest. Throws ConfigError for lambda outside (0,1) or
/// grid_n < 50.
Condition1Report validate_condition1(const std::vector<ParameterSet>& sets,
                                     const StorageBundle& bundle,
                                     const PlantModel& plant,
                                     const Condition1Options& options = {});

}  // namespace stc
