#include "stc/phi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stc/errors.hpp"

namespace stc {

double RiccatiRhs::rk4_step(double phi, double h) const {
  const double k1 = (*this)(phi);
  const double k2 = (*this)(phi + 0.5 * h * k1);
  const double k3 = (*this)(phi + 0.5 * h * k2);
  const double k4 = (*this)(phi + h * k3);
  return phi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

PhiTable PhiTable::integrate(const RiccatiRhs& rhs, double phi0, double horizon,
                             double step) {
  if (!(step > 0.0) || !(horizon > 0.0)) {
    throw ConfigError("integrate_phi: horizon and step must be positive");
  }
  if (step > horizon / 10.0 * (1.0 + 1e-12)) {
    throw ConfigError("integrate_phi: step must not exceed horizon / 10");
  }
  if (!std::isfinite(phi0)) throw IntegrationError("integrate_phi: non-finite phi(0)");

  PhiTable table;
  table.rhs_ = rhs;
  table.step_ = step;
  const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  table.values_.reserve(n + 1);
  table.values_.push_back(phi0);
  double phi = phi0;
  for (std::size_t i = 0; i < n; ++i) {
    phi = rhs.rk4_step(phi, step);
    if (!std::isfinite(phi)) {
      throw IntegrationError("integrate_phi: non-finite value at tau = " +
                             std::to_string(static_cast<double>(i + 1) * step));
    }
    table.values_.push_back(phi);
    if (phi < kPhiBlowDown) {
      table.truncated_ = true;
      break;
    }
  }
  return table;
}

double PhiTable::at(double tau) const {
  if (values_.empty()) throw std::out_of_range("PhiTable::at on empty table");
  if (tau < 0.0 || tau > end() * (1.0 + 1e-12) + 1e-15) {
    throw std::out_of_range("PhiTable::at: tau outside the table");
  }
  auto i = static_cast<std::size_t>(tau / step_);
  i = std::min(i, values_.size() - 1);
  const double delta = tau - this->tau(i);
  if (delta <= 0.0) return values_[i];
  return rhs_.rk4_step(values_[i], delta);
}

namespace {

/// Bisection for the last time in [t0, t0 + h] where the value stays above
/// `threshold`, given that it holds at t0 and fails at t0 + h.
double refine_crossing(const RiccatiRhs& rhs, double phi_start, double t0, double h,
                       double threshold, double tol) {
  double lo = 0.0;
  double hi = h;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (rhs.rk4_step(phi_start, mid) >= threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return t0 + lo;
}

}  // namespace

std::optional<double> PhiTable::last_time_above(double threshold, double tol) const {
  if (values_.empty() || values_[0] < threshold) return 0.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < threshold) {
      return refine_crossing(rhs_, values_[i - 1], tau(i - 1), step_, threshold, tol);
    }
  }
  return std::nullopt;
}

PhiTable integrate_phi(double eps, double gamma, double l, double phi0,
                       double horizon, double step) {
  return PhiTable::integrate(RiccatiRhs{eps, gamma, l}, phi0, horizon, step);
}

double default_phi_step(const ParameterSet& p, double tau_mad) {
  double step = tau_mad / 50.0;
  for (int ell = 0; ell < 2; ++ell) {
    const double rate = std::abs(p.l(ell)) + p.gamma(ell);
    step = std::min(step, 1e-4 * std::max(1.0, 1.0 / rate));
  }
  return step;
}

bool mode_transition_holds(const ParameterSet& p, double tau_mad, double step) {
  const RiccatiRhs rhs0{p.eps, p.gamma0, p.l0};
  const RiccatiRhs rhs1{p.eps, p.gamma1, p.l1};
  auto ordered = [&](double phi0, double phi1) {
    return p.gamma1 * phi1 >= p.gamma0 * phi0 && p.gamma0 * phi0 > 0.0;
  };
  double phi0 = p.phi0_init;
  double phi1 = p.phi1_init;
  if (!ordered(phi0, phi1)) return false;
  double tau = 0.0;
  while (tau_mad - tau > 1e-15 * tau_mad) {
    const double dt = std::min(step, tau_mad - tau);
    phi0 = rhs0.rk4_step(phi0, dt);
    phi1 = rhs1.rk4_step(phi1, dt);
    if (!std::isfinite(phi0) || !std::isfinite(phi1)) {
      throw IntegrationError("non-finite phi on [0, tau_mad]");
    }
    tau = dt < step ? tau_mad : tau + step;
    if (!ordered(phi0, phi1)) return false;
  }
  return true;
}

TmaxResult t_max(const ParameterSet& p, double lambda, double c_u, double tau_mad,
                 double horizon_cap, double step) {
  if (!(tau_mad > 0.0)) throw ConfigError("t_max: tau_mad must be positive");
  if (!(horizon_cap >= tau_mad)) throw ConfigError("t_max: horizon_cap < tau_mad");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ConfigError("t_max: lambda outside [0, 1)");
  if (!(c_u > 0.0)) throw ConfigError("t_max: c_u must be positive");
  const double h = step > 0.0 ? step : default_phi_step(p, tau_mad);

  const RiccatiRhs rhs0{p.eps, p.gamma0, p.l0};

  if (!mode_transition_holds(p, tau_mad, h)) return {};

  // Threshold condition gamma_0 phi_0 >= lambda^2 c_u, on the fixed grid.
  const double threshold = lambda * lambda * c_u / p.gamma0;
  double phi = p.phi0_init;
  if (phi < threshold) return {};
  double crossing = horizon_cap;
  bool capped = true;
  for (std::size_t i = 0;; ++i) {
    const double tau = static_cast<double>(i) * h;
    if (tau + h >= horizon_cap) {
      const double rest = horizon_cap - tau;
      if (rhs0.rk4_step(phi, rest) < threshold) {
        crossing = refine_crossing(rhs0, phi, tau, rest, threshold, kTmaxRefineTol);
        capped = false;
      }
      break;
    }
    const double next = rhs0.rk4_step(phi, h);
    if (!std::isfinite(next)) throw IntegrationError("t_max: non-finite phi_0");
    if (next < threshold) {
      crossing = refine_crossing(rhs0, phi, tau, h, threshold, kTmaxRefineTol);
      capped = false;
      break;
    }
    phi = next;
  }
  if (capped) return {horizon_cap, true};
  const double value = crossing - kTmaxRefineTol;
  if (value < tau_mad) return {};
  return {value, false};
}

}  // namespace stc
