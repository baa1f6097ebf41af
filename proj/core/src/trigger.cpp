#include "stc/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stc/errors.hpp"

namespace stc {

double TriggerConfig::max_t_max() const {
  return t_max.empty() ? 0.0 : *std::max_element(t_max.begin(), t_max.end());
}

double TriggerConfig::phi(std::size_t set, int ell, double tau) const {
  const PhiTable& table = ell == 0 ? tables.at(set).phi0 : tables.at(set).phi1;
  try {
    return table.at(tau);
  } catch (const std::out_of_range&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

TriggerConfig make_trigger_config(const TriggerSettings& settings,
                                  std::vector<ParameterSet> sets) {
  if (!(settings.lambda > 0.0 && settings.lambda < 1.0)) {
    throw ConfigError("lambda must lie in (0, 1)");
  }
  if (!(settings.c_x > 0.0)) throw ConfigError("c_x must be positive");
  if (settings.m == 0) throw ConfigError("window length m must be positive");
  if (!(settings.tau_mad > 0.0)) throw ConfigError("tau_mad must be positive");
  if (!(settings.horizon_cap >= settings.tau_mad)) {
    throw ConfigError("horizon_cap must be at least tau_mad");
  }
  if (sets.empty()) throw ConfigError("at least one parameter set is required");
  for (const auto& p : sets) p.validate();
  if (!(sets.front().eps > 0.0)) {
    throw ConfigError("reference set must have eps > 0, got eps = " +
                      std::to_string(sets.front().eps));
  }

  TriggerConfig cfg;
  cfg.settings = settings;
  cfg.sets = std::move(sets);
  cfg.c_u = cfg.sets.front().gamma1 * cfg.sets.front().phi1_init;

  std::vector<double> steps;
  for (const auto& p : cfg.sets) {
    const double step =
        settings.phi_step > 0.0 ? settings.phi_step : default_phi_step(p, settings.tau_mad);
    const TmaxResult r =
        t_max(p, settings.lambda, cfg.c_u, settings.tau_mad, settings.horizon_cap, step);
    cfg.t_max.push_back(r.value);
    cfg.cap_bound.push_back(r.cap_bound);
    steps.push_back(step);
  }
  cfg.t_min = cfg.t_max.front();
  if (!(cfg.t_min >= settings.tau_mad)) {
    throw ConfigError("reference set violates t_min >= tau_mad (T_max = " +
                      std::to_string(cfg.t_min) + ", tau_mad = " +
                      std::to_string(settings.tau_mad) + ")");
  }

  const double span0 = std::max(cfg.max_t_max(), settings.tau_mad);
  for (std::size_t i = 0; i < cfg.sets.size(); ++i) {
    const auto& p = cfg.sets[i];
    const double step = steps[i];
    SetTables t;
    t.phi0 = PhiTable::integrate({p.eps, p.gamma0, p.l0}, p.phi0_init,
                                 span0 + 2.0 * step, step);
    t.phi1 = PhiTable::integrate({p.eps, p.gamma1, p.l1}, p.phi1_init,
                                 settings.tau_mad + 2.0 * step, step);
    cfg.tables.push_back(std::move(t));
  }
  return cfg;
}

double window_value(const TriggerConfig& cfg, const StorageBundle& bundle,
                    std::span<const double> x, std::span<const double> e) {
  return u_after_sampling(bundle, cfg.reference(), x, e);
}

namespace {

TriggerDecision fallback_decision(const TriggerConfig& cfg, const StorageBundle& bundle,
                                  std::span<const double> x, std::span<const double> e,
                                  double c) {
  const ParameterSet& ref = cfg.reference();
  const double u1 = u_after_sampling(bundle, ref, x, e);
  const double growth = std::max(1.0, std::exp(-ref.eps * cfg.t_min));
  if (!(growth * u1 < cfg.settings.c_x)) {
    throw OutOfRegionError("U_1 after sampling is " + std::to_string(u1) +
                           ", not below c_x = " + std::to_string(cfg.settings.c_x));
  }
  return {cfg.t_min, 0, true, u1, c};
}

}  // namespace

TriggerDecision gamma_trigger(const TriggerConfig& cfg, const StorageBundle& bundle,
                              std::span<const double> x, std::span<const double> e,
                              std::span<const double> eta) {
  const ParameterSet& ref = cfg.reference();
  const double c_x = cfg.settings.c_x;
  const double c = c_window(bundle, ref, x, e, eta, c_x, cfg.settings.m);

  bool found = false;
  TriggerDecision best;
  for (std::size_t p = 1; p < cfg.sets.size(); ++p) {
    const ParameterSet& set = cfg.sets[p];
    const double t_max_p = cfg.t_max[p];
    if (!(t_max_p > 0.0)) continue;
    const double u = u_after_sampling(bundle, set, x, e);
    if (u > c || u >= c_x) continue;

    const double rate_gap = ref.eps - set.eps;
    double tau = t_max_p;
    if (rate_gap > 0.0 && u > 0.0) {
      tau = std::min(std::log(c / u) / rate_gap, t_max_p);
    }
    if (!(std::max(1.0, std::exp(-set.eps * tau)) * u < c_x)) continue;
    if (!found || tau > best.tau_max) {
      best = {tau, p, false, u, c};
      found = true;
    }
  }

  if (!found || best.tau_max < cfg.t_min) {
    return fallback_decision(cfg, bundle, x, e, c);
  }

  const double lhs = std::exp(-cfg.sets[best.chosen].eps * best.tau_max) * best.u_chosen_plus;
  const double rhs = std::exp(-ref.eps * best.tau_max) * c;
  if (lhs > rhs * (1.0 + 1e-12)) {
    throw std::logic_error("gamma_trigger: chosen interval violates the window bound");
  }
  return best;
}

TriggerDecision periodic_trigger(const TriggerConfig& cfg, const StorageBundle& bundle,
                                 std::span<const double> x, std::span<const double> e) {
  return fallback_decision(cfg, bundle, x, e,
                           std::numeric_limits<double>::quiet_NaN());
}

Vec update_eta(const TriggerConfig& cfg, const StorageBundle& bundle,
               std::span<const double> eta, std::span<const double> x,
               std::span<const double> e) {
  if (eta.size() != cfg.eta_size()) {
    throw ConfigError("window has " + std::to_string(eta.size()) + " entries, expected " +
                      std::to_string(cfg.eta_size()));
  }
  if (eta.empty()) return {};
  Vec next(eta.begin() + 1, eta.end());
  next.push_back(window_value(cfg, bundle, x, e));
  return next;
}

}  // namespace stc
