#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "stc/model.hpp"

namespace stc {

/// One bundle of constants for which the hybrid storage inequalities hold:
/// (eps, gamma_0, gamma_1, L_0, L_1, phi_0(0), phi_1(0)).
struct ParameterSet {
  double eps = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  double phi0_init = 0.0;
  double phi1_init = 0.0;

  [[nodiscard]] double gamma(int ell) const { return ell == 0 ? gamma0 : gamma1; }
  [[nodiscard]] double l(int ell) const { return ell == 0 ? l0 : l1; }
  [[nodiscard]] double phi_init(int ell) const {
    return ell == 0 ? phi0_init : phi1_init;
  }
  [[nodiscard]] bool has_phi() const { return phi0_init > 0.0 && phi1_init > 0.0; }

  /// Throws ConfigError unless gammas and initial phis are positive.
  void validate() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// Storage functions shared by every parameter set of a family.
///
/// W~ is fixed to the max-form built from W(e) = |e|:
///   W~(0, e, s) = max{|e|, |e + s|},  W~(1, e, s) = max{lambda |e|, |e + s|}.
struct StorageBundle {
  using ScalarFn = std::function<double(std::span<const double>)>;
  using GradientFn =
      std::function<void(std::span<const double>, std::span<double>)>;
  using CrossFn =
      std::function<double(std::span<const double>, std::span<const double>)>;

  ScalarFn v_tilde;
  GradientFn v_gradient;
  CrossFn h;
  double lambda = 0.0;

  [[nodiscard]] double w_tilde(int ell, std::span<const double> e,
                               std::span<const double> s) const;
};

/// V~(x) = coeff |x|^2, H(x, e) = |x|.
StorageBundle make_quadratic_bundle(double v_coeff, double lambda);

/// Maps the single-mode constants (gamma, L, eps) to the two-mode set
/// (gamma, gamma/lambda, L, L/lambda). The initial phis are left at zero.
/// Throws ConfigError unless gamma > 0 and 0 < lambda < 1.
ParameterSet two_mode_set(double gamma, double l, double eps, double lambda);

/// U = V~(x) + gamma_ell phi_ell(tau) W~(ell, e, s)^2.
/// Throws InvalidPhiError when phi_ell_at_tau < 0.
double u_value(const StorageBundle& bundle, const ParameterSet& p,
               double phi_ell_at_tau, int ell, std::span<const double> x,
               std::span<const double> e, std::span<const double> s);

/// Value of U_p directly after a sampling jump: ell = 1, tau = 0, s = -e.
double u_after_sampling(const StorageBundle& bundle, const ParameterSet& p,
                        std::span<const double> x, std::span<const double> e);

/// Window bound C = min{c_x, (U_1 after sampling + sum(eta)) / m}.
/// Throws ConfigError when m == 0 or eta.size() != m - 1.
double c_window(const StorageBundle& bundle, const ParameterSet& p1,
                std::span<const double> x, std::span<const double> e,
                std::span<const double> eta, double c_x, std::size_t m);

/// True iff V~(x) + gamma_{1,1} phi_{1,1}(0) W~(1, -x, x)^2 < c_x.
bool in_region_of_attraction(const StorageBundle& bundle, const ParameterSet& p1,
                             std::span<const double> x, double c_x);

/// Largest distance by which the sublevel set {V~ < c_x} leaves `box`, probed
/// along the coordinate axes and `directions` seeded random rays. 0 when the
/// box contains every probed boundary point.
double sublevel_overhang(const StorageBundle& bundle, const Box& box, double c_x,
                         std::size_t directions = 256);

double euclidean_norm(std::span<const double> v);

}  // namespace stc
