#include "stc/paramgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "stc/errors.hpp"
#include "stc/phi.hpp"

namespace stc {

std::variant<ParameterSet, Infeasible> synthesize_scalar(double eps, double lambda,
                                                         double v_coeff,
                                                         double a3_bound) {
  const double margin = 2.0 * v_coeff - 1.0 - v_coeff * eps;
  if (!(margin > 0.0)) {
    return Infeasible{eps, "storage inequality has no quadratic margin (c = " +
                               std::to_string(margin) + ")"};
  }
  const double gamma = v_coeff * a3_bound / std::sqrt(margin);
  return two_mode_set(gamma, a3_bound, eps, lambda);
}

namespace {

constexpr double kPhi1Margin = 1e-6;

/// Smallest phi_1(0) keeping the mode-transition ordering on [0, tau_mad].
std::optional<double> min_phi1(ParameterSet p, double tau_mad, double step) {
  double lo = p.gamma0 * p.phi0_init / p.gamma1;
  p.phi1_init = lo;
  if (mode_transition_holds(p, tau_mad, step)) return lo;
  double hi = 2.0 * lo;
  for (;;) {
    p.phi1_init = hi;
    if (mode_transition_holds(p, tau_mad, step)) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return std::nullopt;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    p.phi1_init = mid;
    if (mode_transition_holds(p, tau_mad, step)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Keep the ordering independent of the integration grid.
  return hi * (1.0 + kPhi1Margin);
}

}  // namespace

std::optional<PhiInit> find_phi0(const ParameterSet& core, double lambda,
                                 double tau_mad, const Phi0Target& target,
                                 const PhiSearchOptions& options) {
  if (options.points < 2 || !(options.phi0_lo > 0.0) ||
      !(options.phi0_hi > options.phi0_lo)) {
    throw ConfigError("find_phi0: invalid search range");
  }
  const double step = options.step > 0.0 ? options.step : default_phi_step(core, tau_mad);
  const double log_lo = std::log(options.phi0_lo);
  const double log_hi = std::log(options.phi0_hi);

  std::optional<PhiInit> best;
  for (std::size_t i = 0; i < options.points; ++i) {
    ParameterSet p = core;
    p.phi0_init = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                        static_cast<double>(options.points - 1));
    const auto phi1 = min_phi1(p, tau_mad, step);
    if (!phi1) continue;
    p.phi1_init = *phi1;
    const double own_c_u = p.gamma1 * p.phi1_init;

    double c_u = own_c_u;
    if (target.kind == Phi0Target::Kind::max_tmin) {
      if (target.c_u_cap && own_c_u > *target.c_u_cap) continue;
    } else {
      if (own_c_u > target.c_u) continue;
      c_u = target.c_u;
    }
    const TmaxResult r = t_max(p, lambda, c_u, tau_mad, options.horizon_cap, step);
    if (r.value < tau_mad) continue;
    if (!best || r.value > best->t_max) best = PhiInit{p.phi0_init, p.phi1_init, r.value};
  }
  return best;
}

std::vector<double> default_eps_grid() {
  return {0.01, 0.005, 0.0,  -0.01, -0.05, -0.1, -0.25, -0.5, -1.0, -1.5, -2.0,
          -3.0, -4.0,  -6.0, -8.0,  -10.0, -14.0, -18.0, -24.0, -32.0, -40.0, -50.0};
}

TriggerConfig build_family(const std::vector<double>& eps_list,
                           const FamilyOptions& options, FamilyReport* report) {
  const TriggerSettings& st = options.settings;
  FamilyReport local;
  FamilyReport& rep = report ? *report : local;

  std::vector<ParameterSet> cores;
  for (double eps : eps_list) {
    auto r = synthesize_scalar(eps, st.lambda, options.v_coeff, options.a3_bound);
    if (auto* bad = std::get_if<Infeasible>(&r)) {
      rep.discarded.push_back(*bad);
    } else {
      cores.push_back(std::get<ParameterSet>(r));
    }
  }
  std::stable_sort(cores.begin(), cores.end(),
                   [](const ParameterSet& a, const ParameterSet& b) { return a.eps > b.eps; });

  std::optional<double> cap;
  if (options.roa_reference) {
    const double x = *options.roa_reference;
    const double w = st.lambda * std::abs(x);
    cap = (st.c_x - options.v_coeff * x * x) / (w * w);
    if (!(*cap > 0.0)) {
      throw ConfigError("roa reference state lies outside X");
    }
  }

  PhiSearchOptions search = options.search;
  search.horizon_cap = st.horizon_cap;
  search.step = st.phi_step;

  std::vector<ParameterSet> sets;
  std::size_t ref_index = cores.size();
  for (std::size_t i = 0; i < cores.size() && cores[i].eps > 0.0; ++i) {
    const auto init = find_phi0(cores[i], st.lambda, st.tau_mad, Phi0Target::reference(cap), search);
    if (!init) {
      rep.discarded.push_back({cores[i].eps, "no phi initialisation reaches tau_mad"});
      continue;
    }
    ParameterSet p = cores[i];
    p.phi0_init = init->phi0;
    p.phi1_init = init->phi1;
    sets.push_back(p);
    ref_index = i;
    break;
  }
  if (sets.empty()) {
    throw ConfigError("no feasible parameter set with eps > 0 satisfies t_min >= tau_mad");
  }
  const double c_u = sets.front().gamma1 * sets.front().phi1_init;

  for (std::size_t i = 0; i < cores.size(); ++i) {
    if (i == ref_index) continue;
    const auto init = find_phi0(cores[i], st.lambda, st.tau_mad, Phi0Target::against(c_u), search);
    if (!init) {
      rep.discarded.push_back({cores[i].eps, "no phi initialisation reaches tau_mad"});
      continue;
    }
    ParameterSet p = cores[i];
    p.phi0_init = init->phi0;
    p.phi1_init = init->phi1;
    sets.push_back(p);
  }
  for (const auto& d : rep.discarded) {
    spdlog::info("paramgen: discarded eps = {}: {}", d.eps, d.reason);
  }
  return make_trigger_config(st, std::move(sets));
}

std::string_view to_string(Condition1Check check) {
  switch (check) {
    case Condition1Check::v_decrease: return "v_decrease";
    case Condition1Check::w_decrease: return "w_decrease";
    case Condition1Check::w_jump_sample: return "w_jump_sample";
    case Condition1Check::w_jump_update: return "w_jump_update";
  }
  return "unknown";
}

namespace {

/// Symmetric grid on [-r, r] with cubic spacing, dense near zero.
std::vector<double> clustered(double r, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = r * u * u * u;
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

double scalar_drift(const PlantModel& plant, double x, double e) {
  const double xv[1] = {x};
  const double ev[1] = {e};
  double out[1];
  plant.drift(xv, ev, out);
  return out[0];
}

}  // namespace

Condition1Report validate_condition1(const std::vector<ParameterSet>& sets,
                                     const StorageBundle& bundle, const PlantModel& plant,
                                     const Condition1Options& options) {
  const double lambda = bundle.lambda;
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
  if (options.grid_n < 50) throw ConfigError("validate_condition1: grid_n must be >= 50");
  if (plant.state_dim != 1) {
    throw ConfigError("validate_condition1: grid validation supports scalar plants only");
  }

  Condition1Report report;
  const auto xs = linspace(plant.x_set.lower[0], plant.x_set.upper[0], options.grid_n);
  const double e_radius = std::max(-plant.e_set.lower[0], plant.e_set.upper[0]);
  auto es = clustered(e_radius, options.grid_n);
  for (auto& e : es) e = std::clamp(e, plant.e_set.lower[0], plant.e_set.upper[0]);
  const auto s_grid = linspace(plant.e_set.lower[0], plant.e_set.upper[0],
                               std::max<std::size_t>(options.s_points, 2));
  auto record = [&](Condition1Violation v) {
    ++report.failures;
    if (report.violations.size() < 1000) report.violations.push_back(v);
  };

  // Jump inequalities do not depend on x or the set.
  for (double e : es) {
    auto s_values = s_grid;
    s_values.push_back(-e);
    for (double s : s_values) {
      const double ev[1] = {e};
      const double sv[1] = {s};
      const double minus_e[1] = {-e};
      const double w1_sample = bundle.w_tilde(1, ev, minus_e);
      const double w0 = bundle.w_tilde(0, ev, sv);
      ++report.checks;
      if (w1_sample > lambda * w0 + options.tolerance) {
        record({0, 1, Condition1Check::w_jump_sample, 0.0, e, s, w1_sample, lambda * w0});
      }
      const double se[1] = {s + e};
      const double minus_se[1] = {-(s + e)};
      const double w0_update = bundle.w_tilde(0, se, minus_se);
      const double w1 = bundle.w_tilde(1, ev, sv);
      ++report.checks;
      if (w0_update > w1 + options.tolerance) {
        record({0, 0, Condition1Check::w_jump_update, 0.0, e, s, w0_update, w1});
      }
    }
  }

  std::vector<double> a3_values;
  if (options.a3_bound) a3_values = {-*options.a3_bound, *options.a3_bound};

  for (std::size_t idx = 0; idx < sets.size(); ++idx) {
    const ParameterSet& p = sets[idx];
    for (double x : xs) {
      const double xv[1] = {x};
      double grad[1];
      bundle.v_gradient(xv, grad);
      const double v = bundle.v_tilde(xv);
      for (double e : es) {
        const double ev[1] = {e};
        const double h = bundle.h(xv, ev);
        std::vector<double> drifts = {scalar_drift(plant, x, e)};
        for (double a3 : a3_values) drifts.push_back(-x - a3 * e);

        auto s_values = s_grid;
        s_values.push_back(-e);
        for (double s : s_values) {
          const double sv[1] = {s};
          for (int ell = 0; ell < 2; ++ell) {
            const double w = bundle.w_tilde(ell, ev, sv);
            const double rhs_v = -p.eps * v - h * h + p.gamma(ell) * p.gamma(ell) * w * w;
            // Derivative of W~ along g = -f on the active branch.
            const double scale = ell == 0 ? 1.0 : lambda;
            const double branch_e = scale * std::abs(e);
            const double branch_es = std::abs(e + s);
            const bool kink = std::abs(branch_e - branch_es) <= 1e-6;
            const double rhs_w = p.l(ell) * w + h;
            for (double f : drifts) {
              ++report.checks;
              const double lhs_v = grad[0] * f;
              if (lhs_v > rhs_v + options.tolerance) {
                record({idx, ell, Condition1Check::v_decrease, x, e, s, lhs_v, rhs_v});
              }
              if (kink) continue;
              const double g = -f;
              double dw = 0.0;
              if (branch_e > branch_es) {
                if (e == 0.0) continue;
                dw = scale * sign(e) * g;
              } else {
                if (e + s == 0.0) continue;
                dw = sign(e + s) * g;
              }
              ++report.checks;
              if (dw > rhs_w + options.tolerance) {
                record({idx, ell, Condition1Check::w_decrease, x, e, s, dw, rhs_w});
              }
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace stc
