#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stc/storage.hpp"

namespace stc {

/// Right-hand side of phi' = -2 (L + eps/2) phi - gamma (phi^2 + 1).
struct RiccatiRhs {
  double eps = 0.0;
  double gamma = 0.0;
  double l = 0.0;

  [[nodiscard]] double operator()(double phi) const {
    return -2.0 * (l + 0.5 * eps) * phi - gamma * (phi * phi + 1.0);
  }
  /// One classical RK4 step of length h.
  [[nodiscard]] double rk4_step(double phi, double h) const;
};

/// Values below this stop the integration; the table is then truncated.
inline constexpr double kPhiBlowDown = -1e6;

/// Dense fixed-step tabulation of a phi solution starting at tau = 0.
class PhiTable {
 public:
  PhiTable() = default;

  /// Integrates from phi(0) = phi0 up to `horizon` with fixed `step`.
  /// Requires step <= horizon / 10. Throws IntegrationError on non-finite
  /// values and ConfigError on bad arguments.
  static PhiTable integrate(const RiccatiRhs& rhs, double phi0, double horizon,
                            double step);

  [[nodiscard]] const RiccatiRhs& rhs() const { return rhs_; }
  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double tau(std::size_t i) const {
    return static_cast<double>(i) * step_;
  }
  /// Last tabulated time.
  [[nodiscard]] double end() const { return tau(values_.size() - 1); }
  [[nodiscard]] bool truncated() const { return truncated_; }

  /// phi(tau) for 0 <= tau <= end(); between grid points the RK4 step is
  /// taken from the preceding sample with the remaining length.
  [[nodiscard]] double at(double tau) const;

  /// Largest T with phi(t) >= threshold on all of [0, T], refined by
  /// bisection to `tol`. nullopt when the threshold is never crossed within
  /// the table; 0 when phi(0) < threshold.
  [[nodiscard]] std::optional<double> last_time_above(double threshold,
                                                      double tol = 1e-9) const;

 private:
  RiccatiRhs rhs_;
  double step_ = 0.0;
  bool truncated_ = false;
  std::vector<double> values_;
};

PhiTable integrate_phi(double eps, double gamma, double l, double phi0,
                       double horizon, double step);

/// min(tau_mad / 50, 1e-4 max(1, 1/(|L| + gamma))) over both modes of `p`.
double default_phi_step(const ParameterSet& p, double tau_mad);

struct TmaxResult {
  double value = 0.0;
  /// The threshold was never crossed before `horizon_cap`.
  bool cap_bound = false;
};

inline constexpr double kTmaxRefineTol = 1e-9;

/// gamma_1 phi_1(tau) >= gamma_0 phi_0(tau) > 0 on the step grid of
/// [0, tau_mad] (tau_mad itself included).
bool mode_transition_holds(const ParameterSet& p, double tau_mad, double step);

/// Maximum certified inter-sampling time for `p`:
///  0 if gamma_1 phi_1 >= gamma_0 phi_0 > 0 fails anywhere on [0, tau_mad],
///  otherwise the largest T in [tau_mad, horizon_cap] such that
///  gamma_0 phi_0(tau) >= lambda^2 c_u on [0, T] (0 if no such T exists).
/// `step` <= 0 selects default_phi_step.
TmaxResult t_max(const ParameterSet& p, double lambda, double c_u,
                 double tau_mad, double horizon_cap, double step = 0.0);

}  // namespace stc
