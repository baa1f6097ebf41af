#include "stc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "stc/errors.hpp"

namespace stc {

std::span<const double> SolutionTrace::x(std::size_t i) const {
  return {states.data() + i * 3 * state_dim, state_dim};
}

std::span<const double> SolutionTrace::e(std::size_t i) const {
  return {states.data() + (i * 3 + 1) * state_dim, state_dim};
}

std::span<const double> SolutionTrace::s(std::size_t i) const {
  return {states.data() + (i * 3 + 2) * state_dim, state_dim};
}

std::size_t SolutionTrace::sampling_count() const {
  return 1 + static_cast<std::size_t>(
                 std::count_if(events.begin(), events.end(),
                               [](const Event& ev) { return ev.kind == EventKind::sample; }));
}

std::vector<double> SolutionTrace::sampling_intervals() const {
  std::vector<double> out{initial.value};
  for (const auto& ev : events) {
    if (ev.kind == EventKind::sample) out.push_back(ev.value);
  }
  return out;
}

namespace {

TriggerDecision decide(const TriggerConfig& cfg, const StorageBundle& bundle,
                       std::span<const double> x, std::span<const double> e,
                       std::span<const double> eta, TriggerMode mode) {
  if (mode == TriggerMode::periodic) return periodic_trigger(cfg, bundle, x, e);
  return gamma_trigger(cfg, bundle, x, e, eta);
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void require_finite(std::span<const double> v, const char* what) {
  for (double d : v) {
    if (!std::isfinite(d)) throw IntegrationError(std::string("non-finite ") + what);
  }
}

/// U of set `p` at xi; NaN where phi is not tabulated or negative.
double u_or_nan(const TriggerConfig& cfg, const StorageBundle& bundle, std::size_t p,
                const HybridState& xi) {
  const double phi = cfg.phi(p, xi.ell, xi.tau);
  if (!(phi >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return u_value(bundle, cfg.sets[p], phi, xi.ell, xi.x, xi.e, xi.s);
}

class Recorder {
 public:
  Recorder(const TriggerConfig& cfg, const StorageBundle& bundle, SolutionTrace& trace,
           std::optional<InvariantChecker>& checker)
      : cfg_(cfg), bundle_(bundle), trace_(trace), checker_(checker) {}

  void point(const HybridState& xi, HybridTime time, SampleRole role, std::size_t chosen,
             bool keep, const IntervalStart& start = {}) {
    TraceSample sample;
    sample.time = time;
    sample.ell = xi.ell;
    sample.tau = xi.tau;
    sample.tau_max = xi.tau_max;
    sample.u1 = u_or_nan(cfg_, bundle_, 0, xi);
    sample.u_chosen = chosen == 0 ? sample.u1 : u_or_nan(cfg_, bundle_, chosen, xi);
    sample.chosen = chosen;
    sample.eta_norm = euclidean_norm(xi.eta);
    sample.role = role;

    if (checker_) {
      checker_->observe({time.t, time.j, role, sample.u_chosen, sample.u1, sample.eta_norm,
                         start});
    }
    if (!keep) return;
    trace_.samples.push_back(sample);
    trace_.states.insert(trace_.states.end(), xi.x.begin(), xi.x.end());
    trace_.states.insert(trace_.states.end(), xi.e.begin(), xi.e.end());
    trace_.states.insert(trace_.states.end(), xi.s.begin(), xi.s.end());
  }

 private:
  const TriggerConfig& cfg_;
  const StorageBundle& bundle_;
  SolutionTrace& trace_;
  std::optional<InvariantChecker>& checker_;
};

}  // namespace

HybridState initial_state(const PlantModel& plant, const TriggerConfig& cfg,
                          const StorageBundle& bundle, std::span<const double> x0,
                          std::optional<Vec> eta0, TriggerMode mode,
                          TriggerDecision* decision) {
  if (x0.size() != plant.state_dim) {
    throw DomainError("x0 has dimension " + std::to_string(x0.size()) + ", plant expects " +
                      std::to_string(plant.state_dim));
  }
  if (!in_region_of_attraction(bundle, cfg.reference(), x0, cfg.settings.c_x)) {
    spdlog::warn("x0 lies outside the certified region of attraction");
  }
  HybridState xi;
  xi.x.assign(x0.begin(), x0.end());
  xi.e.resize(x0.size());
  std::transform(x0.begin(), x0.end(), xi.e.begin(), [](double v) { return -v; });
  xi.s = xi.x;
  if (eta0) {
    if (eta0->size() != cfg.eta_size()) {
      throw ConfigError("eta0 has " + std::to_string(eta0->size()) + " entries, expected " +
                        std::to_string(cfg.eta_size()));
    }
    xi.eta = std::move(*eta0);
  } else {
    xi.eta.assign(cfg.eta_size(), window_value(cfg, bundle, xi.x, xi.e));
  }
  const TriggerDecision d = decide(cfg, bundle, xi.x, xi.e, xi.eta, mode);
  if (decision) *decision = d;
  xi.tau = 0.0;
  xi.tau_max = d.tau_max;
  xi.ell = 1;
  return xi;
}

HybridState flow_step(const PlantModel& plant, const HybridState& xi, double h) {
  const std::size_t n = xi.x.size();
  Vec k1 = eval_f(plant, xi.x, xi.e);
  Vec xt(n), et(n);
  auto stage = [&](const Vec& k, double a) {
    for (std::size_t i = 0; i < n; ++i) {
      xt[i] = xi.x[i] + a * k[i];
      et[i] = xi.e[i] - a * k[i];
    }
    return eval_f(plant, xt, et);
  };
  Vec k2 = stage(k1, 0.5 * h);
  Vec k3 = stage(k2, 0.5 * h);
  Vec k4 = stage(k3, h);

  HybridState out = xi;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out.x[i] += dx;
    out.e[i] -= dx;
  }
  out.tau += h;
  require_finite(out.x, "state after flow step");
  require_finite(out.e, "error after flow step");
  return out;
}

JumpOutcome jump(const TriggerConfig& cfg, const StorageBundle& bundle,
                 const PlantModel& plant, const HybridState& xi, TriggerMode mode) {
  (void)plant;
  JumpOutcome out{xi, {}};
  HybridState& next = out.state;
  if (xi.ell == 0) {
    const TriggerDecision d = decide(cfg, bundle, xi.x, xi.e, xi.eta, mode);
    next.s.resize(xi.e.size());
    std::transform(xi.e.begin(), xi.e.end(), next.s.begin(), [](double v) { return -v; });
    next.eta = update_eta(cfg, bundle, xi.eta, xi.x, xi.e);
    next.tau = 0.0;
    next.tau_max = d.tau_max;
    next.ell = 1;
    out.event.kind = EventKind::sample;
    out.event.value = d.tau_max;
    out.event.chosen = d.chosen;
    out.event.fallback = d.fallback;
    out.event.u1_plus = window_value(cfg, bundle, xi.x, xi.e);
    out.event.eta_sum = sum(xi.eta);
  } else {
    for (std::size_t i = 0; i < xi.e.size(); ++i) {
      next.e[i] = xi.s[i] + xi.e[i];
      next.s[i] = -next.e[i];
    }
    next.ell = 0;
    out.event.kind = EventKind::update;
    out.event.value = xi.tau;
  }
  return out;
}

SimulationResult simulate(const PlantModel& plant, const TriggerConfig& cfg,
                          const StorageBundle& bundle, std::span<const double> x0,
                          DelayModel delay, const SimulationOptions& options) {
  if (!(options.horizon > 0.0)) throw ConfigError("horizon must be positive");
  delay.validate(cfg.settings.tau_mad);
  const double step = options.flow_step > 0.0 ? options.flow_step : cfg.t_min / 200.0;
  const std::size_t every = std::max<std::size_t>(1, options.record_every);

  SimulationResult result;
  SolutionTrace& trace = result.trace;
  trace.state_dim = plant.state_dim;
  std::optional<InvariantChecker> checker;
  if (options.check_online) checker.emplace(cfg, options.tolerance);
  Recorder rec(cfg, bundle, trace, checker);

  auto fail = [&](FailureKind kind, const std::exception& ex, double t) {
    result.failure = SimulationFailure{kind, ex.what()};
    spdlog::error("simulation stopped at t = {}: {}", t, ex.what());
  };

  TriggerDecision d0;
  HybridState xi;
  try {
    xi = initial_state(plant, cfg, bundle, x0, options.eta0, options.mode, &d0);
  } catch (const OutOfRegionError& ex) {
    fail(FailureKind::out_of_region, ex, 0.0);
    return result;
  }

  trace.initial = {0, 0.0, EventKind::sample, d0.tau_max, d0.chosen, d0.fallback,
                   window_value(cfg, bundle, xi.x, xi.e), sum(xi.eta)};
  HybridTime time{0.0, 0};
  std::uint64_t k = 0;
  std::size_t chosen = d0.chosen;
  double pending_delay = delay.next();
  rec.point(xi, time, SampleRole::post_sample, chosen, true,
            {d0.chosen, d0.fallback, trace.initial.u1_plus, trace.initial.eta_sum});

  try {
    std::size_t flow_steps = 0;
    for (;;) {
      const double target = xi.ell == 1 ? pending_delay : xi.tau_max;
      bool at_horizon = false;
      while (xi.tau < target) {
        double h = std::min(step, target - xi.tau);
        if (target - xi.tau - h < 1e-3 * step) h = target - xi.tau;
        const bool hits_horizon = options.horizon - time.t <= h;
        if (hits_horizon) h = options.horizon - time.t;
        const bool lands = !hits_horizon && h == target - xi.tau;
        xi = flow_step(plant, xi, h);
        if (lands) xi.tau = target;
        time.t = hits_horizon ? options.horizon : time.t + h;
        ++flow_steps;
        const bool keep = hits_horizon || lands || flow_steps % every == 0;
        rec.point(xi, time, lands ? (xi.ell == 1 ? SampleRole::pre_update
                                                 : SampleRole::pre_sample)
                                  : SampleRole::flow,
                  chosen, keep);
        if (hits_horizon) {
          at_horizon = true;
          break;
        }
      }
      if (at_horizon || time.t >= options.horizon) break;

      JumpOutcome jo = jump(cfg, bundle, plant, xi, options.mode);
      ++time.j;
      jo.event.k = ++k;
      jo.event.t = time.t;
      xi = std::move(jo.state);
      if (jo.event.kind == EventKind::sample) {
        chosen = jo.event.chosen;
        pending_delay = delay.next();
        rec.point(xi, time, SampleRole::post_sample, chosen, true,
                  {jo.event.chosen, jo.event.fallback, jo.event.u1_plus, jo.event.eta_sum});
      } else {
        rec.point(xi, time, SampleRole::post_update, chosen, true);
      }
      trace.events.push_back(jo.event);
    }
  } catch (const OutOfRegionError& ex) {
    fail(FailureKind::out_of_region, ex, time.t);
  } catch (const IntegrationError& ex) {
    fail(FailureKind::integration, ex, time.t);
  } catch (const DomainError& ex) {
    fail(FailureKind::domain, ex, time.t);
  }

  if (checker) result.report = checker->report();
  result.final_state = xi;
  return result;
}

InvariantReport check_invariants(const SolutionTrace& trace, const TriggerConfig& cfg,
                                 const StorageBundle& bundle, double tolerance) {
  (void)bundle;
  InvariantChecker checker(cfg, tolerance);
  std::vector<const Event*> samples{&trace.initial};
  for (const auto& ev : trace.events) {
    if (ev.kind == EventKind::sample) samples.push_back(&ev);
  }
  std::size_t next_sample = 0;
  for (const auto& s : trace.samples) {
    CheckPoint cp{s.time.t, s.time.j, s.role, s.u_chosen, s.u1, s.eta_norm, {}};
    if (s.role == SampleRole::post_sample) {
      if (next_sample >= samples.size()) break;
      const Event& ev = *samples[next_sample++];
      cp.start = {ev.chosen, ev.fallback, ev.u1_plus, ev.eta_sum};
    }
    checker.observe(cp);
  }
  return checker.report();
}

}  // namespace stc
