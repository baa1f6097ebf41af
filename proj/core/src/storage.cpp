#include "stc/storage.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stc/errors.hpp"

namespace stc {

double euclidean_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void ParameterSet::validate() const {
  if (!(gamma0 > 0.0) || !(gamma1 > 0.0)) {
    throw ConfigError("parameter set: gamma0 and gamma1 must be positive");
  }
  if (!(phi0_init > 0.0) || !(phi1_init > 0.0)) {
    throw ConfigError("parameter set: phi0(0) and phi1(0) must be positive");
  }
  if (!std::isfinite(eps) || !std::isfinite(l0) || !std::isfinite(l1)) {
    throw ConfigError("parameter set: non-finite eps or L");
  }
}

double StorageBundle::w_tilde(int ell, std::span<const double> e,
                              std::span<const double> s) const {
  double e2 = 0.0;
  double es2 = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e2 += e[i] * e[i];
    const double sum = e[i] + s[i];
    es2 += sum * sum;
  }
  const double scale = ell == 0 ? 1.0 : lambda;
  return std::max(scale * std::sqrt(e2), std::sqrt(es2));
}

StorageBundle make_quadratic_bundle(double v_coeff, double lambda) {
  StorageBundle b;
  b.lambda = lambda;
  b.v_tilde = [v_coeff](std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return v_coeff * sum;
  };
  b.v_gradient = [v_coeff](std::span<const double> x, std::span<double> grad) {
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = 2.0 * v_coeff * x[i];
  };
  b.h = [](std::span<const double> x, std::span<const double>) {
    return euclidean_norm(x);
  };
  return b;
}

ParameterSet two_mode_set(double gamma, double l, double eps, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ConfigError("lambda must lie in (0, 1), got " + std::to_string(lambda));
  }
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  ParameterSet p;
  p.eps = eps;
  p.gamma0 = gamma;
  p.gamma1 = gamma / lambda;
  p.l0 = l;
  p.l1 = l / lambda;
  return p;
}

double u_value(const StorageBundle& bundle, const ParameterSet& p,
               double phi_ell_at_tau, int ell, std::span<const double> x,
               std::span<const double> e, std::span<const double> s) {
  if (!(phi_ell_at_tau >= 0.0)) {
    throw InvalidPhiError("phi_" + std::to_string(ell) +
                          " is negative: horizon of the parameter set exceeded");
  }
  const double w = bundle.w_tilde(ell, e, s);
  return bundle.v_tilde(x) + p.gamma(ell) * phi_ell_at_tau * w * w;
}

double u_after_sampling(const StorageBundle& bundle, const ParameterSet& p,
                        std::span<const double> x, std::span<const double> e) {
  // W~(1, e, -e) = lambda |e|.
  const double w = bundle.lambda * euclidean_norm(e);
  return bundle.v_tilde(x) + p.gamma1 * p.phi1_init * w * w;
}

double c_window(const StorageBundle& bundle, const ParameterSet& p1,
                std::span<const double> x, std::span<const double> e,
                std::span<const double> eta, double c_x, std::size_t m) {
  if (m == 0) throw ConfigError("window length m must be positive");
  if (eta.size() != m - 1) {
    throw ConfigError("window has " + std::to_string(eta.size()) +
                      " entries, expected " + std::to_string(m - 1));
  }
  double sum = u_after_sampling(bundle, p1, x, e);
  for (double v : eta) sum += v;
  return std::min(c_x, sum / static_cast<double>(m));
}

bool in_region_of_attraction(const StorageBundle& bundle, const ParameterSet& p1,
                             std::span<const double> x, double c_x) {
  // e = -x, s = x: W~(1, -x, x) = lambda |x|.
  const double w = bundle.lambda * euclidean_norm(x);
  return bundle.v_tilde(x) + p1.gamma1 * p1.phi1_init * w * w < c_x;
}

double sublevel_overhang(const StorageBundle& bundle, const Box& box, double c_x,
                         std::size_t directions) {
  const std::size_t n = box.dim();
  std::vector<Vec> rays;
  for (std::size_t i = 0; i < n; ++i) {
    for (double sgn : {-1.0, 1.0}) {
      Vec d(n, 0.0);
      d[i] = sgn;
      rays.push_back(d);
    }
  }
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (std::size_t k = 0; k < directions && n > 1; ++k) {
    Vec d(n);
    for (auto& v : d) v = normal(rng);
    const double norm = euclidean_norm(d);
    for (auto& v : d) v /= norm;
    rays.push_back(d);
  }

  double worst = 0.0;
  Vec x(n);
  for (const Vec& d : rays) {
    auto at = [&](double r) {
      for (std::size_t i = 0; i < n; ++i) x[i] = r * d[i];
      return bundle.v_tilde(x);
    };
    double hi = 1.0;
    while (at(hi) < c_x && hi < 1e12) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) < c_x ? lo : hi) = mid;
    }
    at(lo);
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max({worst, x[i] - box.upper[i], box.lower[i] - x[i]});
    }
  }
  return worst;
}

}  // namespace stc
