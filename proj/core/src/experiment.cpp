#include "stc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "stc/csv.hpp"
#include "stc/errors.hpp"
#include "stc/paramgen.hpp"

namespace stc::cli {

namespace {

template <class Fn>
int guarded(std::ostream& out, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& ex) {
    out << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const OutOfRegionError& ex) {
    out << "out of region: " << ex.what() << '\n';
    return kExitOutOfRegion;
  } catch (const std::exception& ex) {
    out << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

void write_outputs(const std::string& prefix, const SimulationResult& r,
                   const RunSummary& summary) {
  auto trace = open_out(prefix + "_trace.csv");
  write_trace_csv(trace, r.trace);
  auto events = open_out(prefix + "_events.csv");
  write_events_csv(events, r.trace);
  auto text = open_out(prefix + "_summary.txt");
  print_summary(text, summary);
}

SimulationOptions options_for(const TriggerConfig& cfg, double horizon, double flow_step,
                              std::size_t record_every, TriggerMode mode) {
  (void)cfg;
  SimulationOptions o;
  o.horizon = horizon;
  o.flow_step = flow_step;
  o.record_every = record_every;
  o.mode = mode;
  return o;
}

int worst(int a, int b) {
  if (a == kExitOk) return b;
  return a;
}

}  // namespace

LoadedFamily load_family(const FamilySource& source) {
  FamilyFile file;
  if (source.config_path) {
    file = read_family(*source.config_path);
    if (source.m) file.settings.m = *source.m;
  } else {
    FamilyOptions options;
    if (source.m) options.settings.m = *source.m;
    file = to_family(build_family(default_eps_grid(), options));
  }
  TriggerConfig cfg = to_trigger_config(file);
  file.t_max = cfg.t_max;
  StorageBundle bundle = make_quadratic_bundle(example::kVCoeff, cfg.settings.lambda);
  PlantModel plant = plant_by_name(file.plant);
  const double overhang = sublevel_overhang(bundle, plant.x_set, cfg.settings.c_x);
  if (overhang > 0.0) {
    spdlog::warn("sublevel set V~ < c_x extends {:.3g} beyond X", overhang);
  }
  return {std::move(file), std::move(cfg), std::move(bundle), std::move(plant)};
}

DelayModel make_delay(const std::string& spec, double tau_mad) {
  DelayModel d = spec.empty() ? DelayModel::constant(tau_mad) : DelayModel::parse(spec);
  d.validate(tau_mad);
  return d;
}

double hybrid_norm(const HybridState& xi) {
  double s = 0.0;
  for (const Vec* v : {&xi.x, &xi.e, &xi.s, &xi.eta}) {
    for (double d : *v) s += d * d;
  }
  return std::sqrt(s);
}

RunSummary summarize(const SimulationResult& result) {
  RunSummary s;
  s.failure = result.failure;
  if (result.trace.samples.empty()) return s;
  const auto intervals = result.trace.sampling_intervals();
  s.samples = result.trace.sampling_count();
  {
    s.min_interval = *std::min_element(intervals.begin(), intervals.end());
    s.max_interval = *std::max_element(intervals.begin(), intervals.end());
    s.mean_interval = std::accumulate(intervals.begin(), intervals.end(), 0.0) /
                      static_cast<double>(intervals.size());
    s.final_interval = intervals.back();
  }
  s.fallbacks = result.trace.initial.fallback ? 1 : 0;
  for (const auto& ev : result.trace.events) {
    if (ev.kind == EventKind::sample && ev.fallback) ++s.fallbacks;
  }
  s.checks = result.report.total_checks();
  s.violations = std::accumulate(result.report.failures.begin(),
                                 result.report.failures.end(), std::size_t{0});
  {
    const auto& tr = result.trace;
    double sq = tr.samples.front().eta_norm * tr.samples.front().eta_norm;
    for (auto part : {tr.x(0), tr.e(0), tr.s(0)}) {
      for (double v : part) sq += v * v;
    }
    s.initial_norm = std::sqrt(sq);
  }
  s.final_norm = hybrid_norm(result.final_state);
  return s;
}

void print_summary(std::ostream& out, const RunSummary& s) {
  out << std::setprecision(6);
  out << "initial state norm: " << s.initial_norm << '\n' << "sampling instants: " << s.samples << '\n'
      << "interval min/mean/max: " << s.min_interval << " / " << s.mean_interval << " / "
      << s.max_interval << " s\n"
      << "final interval: " << s.final_interval << " s\n"
      << "fallback intervals: " << s.fallbacks << '\n'
      << "invariant checks: " << s.checks << ", violations: " << s.violations << '\n'
      << "final state norm: " << s.final_norm << '\n';
  if (s.failure) out << "failure: " << s.failure->message << '\n';
}

int exit_code(const RunSummary& s) {
  if (s.failure) {
    return s.failure->kind == FailureKind::out_of_region ? kExitOutOfRegion : kExitError;
  }
  return s.violations == 0 ? kExitOk : kExitInvariant;
}

std::vector<double> region_samples(const TriggerConfig& cfg, const StorageBundle& bundle,
                                   std::size_t n, double margin) {
  auto inside = [&](double r) {
    const double x[1] = {r};
    return in_region_of_attraction(bundle, cfg.reference(), x, cfg.settings.c_x);
  };
  double lo = 0.0;
  double hi = 1.0;
  while (inside(hi) && hi < 1e6) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  const double r = margin * lo;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(-r + 2.0 * r * u);
  }
  return out;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    const LoadedFamily fam = load_family(args.family);
    const DelayModel delay = make_delay(args.delay, fam.cfg.settings.tau_mad);
    const auto options =
        options_for(fam.cfg, args.horizon, args.flow_step, args.record_every,
                    args.periodic ? TriggerMode::periodic : TriggerMode::self_triggered);
    const SimulationResult r = simulate(fam.plant, fam.cfg, fam.bundle, args.x0, delay, options);
    const RunSummary s = summarize(r);
    out << "t_min: " << fam.cfg.t_min << " s, max T_max: " << fam.cfg.max_t_max()
        << " s, sets: " << fam.cfg.set_count() << ", delay: " << delay.describe() << '\n';
    print_summary(out, s);
    if (args.out_prefix) write_outputs(*args.out_prefix, r, s);
    return exit_code(s);
  });
}

double CompareResult::ratio() const {
  return static_cast<double>(stc.samples) / static_cast<double>(periodic.samples);
}

CompareResult run_compare(const LoadedFamily& fam, const CompareArgs& args) {
  CompareResult result;
  for (auto mode : {TriggerMode::self_triggered, TriggerMode::periodic}) {
    const DelayModel delay = make_delay(args.delay, fam.cfg.settings.tau_mad);
    auto options = options_for(fam.cfg, args.horizon, args.flow_step, 1, mode);
    const SimulationResult r = simulate(fam.plant, fam.cfg, fam.bundle, args.x0, delay, options);
    const RunSummary s = summarize(r);
    if (args.out_prefix) {
      write_outputs(*args.out_prefix + (mode == TriggerMode::periodic ? "_periodic" : "_stc"),
                    r, s);
    }
    (mode == TriggerMode::periodic ? result.periodic : result.stc) = s;
  }
  return result;
}

int cmd_compare(const CompareArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    const LoadedFamily fam = load_family(args.family);
    const CompareResult r = run_compare(fam, args);
    out << "t_min: " << fam.cfg.t_min << " s\n";
    out << "[self-triggered]\n";
    print_summary(out, r.stc);
    out << "[periodic]\n";
    print_summary(out, r.periodic);
    out << "sample ratio (self-triggered / periodic): " << r.ratio() << '\n';
    out << "final interval / t_min: " << r.stc.final_interval / fam.cfg.t_min << '\n';
    return worst(exit_code(r.stc), exit_code(r.periodic));
  });
}

int cmd_paramgen(const ParamgenArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    FamilyOptions options;
    options.settings = args.settings;
    options.roa_reference = args.roa_reference;
    FamilyReport report;
    const auto eps = args.eps.empty() ? default_eps_grid() : args.eps;
    const TriggerConfig cfg = build_family(eps, options, &report);
    write_family(args.out_path, to_family(cfg));
    out << std::setprecision(6);
    out << "p,eps,gamma0,gamma1,phi0_0,phi1_0,tmax\n";
    for (std::size_t i = 0; i < cfg.set_count(); ++i) {
      const auto& p = cfg.sets[i];
      out << i + 1 << ',' << p.eps << ',' << p.gamma0 << ',' << p.gamma1 << ','
          << p.phi0_init << ',' << p.phi1_init << ',' << cfg.t_max[i] << '\n';
    }
    for (const auto& d : report.discarded) {
      out << "discarded eps = " << d.eps << ": " << d.reason << '\n';
    }
    out << "c_u: " << cfg.c_u << ", t_min: " << cfg.t_min << " s\n"
        << "wrote " << args.out_path << '\n';
    return kExitOk;
  });
}

int cmd_tmax(const TmaxArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    const LoadedFamily fam = load_family(args.family);
    const std::size_t set = args.set == 0 ? 0 : args.set - 1;
    if (set >= fam.cfg.set_count()) {
      throw ConfigError("set " + std::to_string(args.set) + " does not exist");
    }
    out << std::setprecision(9);
    for (std::size_t i = 0; i < fam.cfg.set_count(); ++i) {
      out << "set " << i + 1 << ": eps = " << fam.cfg.sets[i].eps
          << ", T_max = " << fam.cfg.t_max[i] << " s"
          << (fam.cfg.cap_bound[i] ? " (capped)" : "") << '\n';
    }
    if (args.out_path) {
      auto f = open_out(*args.out_path);
      f << "tau,phi0,phi1\n" << std::setprecision(17);
      const double end = std::max(fam.cfg.t_max[set], fam.cfg.settings.tau_mad);
      const std::size_t n = std::max<std::size_t>(2, args.points);
      for (std::size_t i = 0; i < n; ++i) {
        const double tau = end * static_cast<double>(i) / static_cast<double>(n - 1);
        f << tau << ',' << fam.cfg.phi(set, 0, tau) << ',' << fam.cfg.phi(set, 1, tau)
          << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_validate(const ValidateArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    const LoadedFamily fam = load_family(args.family);
    Condition1Options options;
    options.grid_n = args.grid_n;
    const Condition1Report r = validate_condition1(fam.cfg.sets, fam.bundle, fam.plant, options);
    out << "sets: " << fam.cfg.set_count() << ", checks: " << r.checks
        << ", violations: " << r.failures << '\n';
    for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 10); ++i) {
      const auto& v = r.violations[i];
      out << "  set " << v.set + 1 << " ell " << v.ell << ' ' << to_string(v.check)
          << " at x = " << v.x << ", e = " << v.e << ", s = " << v.s << ": " << v.lhs
          << " > " << v.rhs << '\n';
    }
    return r.ok() ? kExitOk : kExitInvariant;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  return guarded(out, [&] {
    const LoadedFamily fam = load_family(args.family);
    const auto x0s =
        args.x0.empty() ? region_samples(fam.cfg, fam.bundle, args.count) : args.x0;
    const DelayModel delay = make_delay(args.delay, fam.cfg.settings.tau_mad);
    const std::size_t jobs =
        args.jobs ? args.jobs : std::max(1u, std::thread::hardware_concurrency());

    std::vector<RunSummary> results(x0s.size());
    auto run = [&](std::size_t i) {
      const Vec x0{x0s[i]};
      auto options = options_for(fam.cfg, args.horizon, 0.0, 100, TriggerMode::self_triggered);
      const SimulationResult r = simulate(fam.plant, fam.cfg, fam.bundle, x0, delay, options);
      results[i] = summarize(r);
      if (args.out_prefix) {
        write_outputs(*args.out_prefix + "_" + std::to_string(i), r, results[i]);
      }
    };
    for (std::size_t begin = 0; begin < x0s.size(); begin += jobs) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = begin; i < std::min(x0s.size(), begin + jobs); ++i) {
        batch.push_back(std::async(std::launch::async, run, i));
      }
      for (auto& f : batch) f.get();
    }

    int code = kExitOk;
    out << std::setprecision(6) << "x0,samples,final_interval,final_norm,violations,status\n";
    for (std::size_t i = 0; i < x0s.size(); ++i) {
      const auto& s = results[i];
      out << x0s[i] << ',' << s.samples << ',' << s.final_interval << ',' << s.final_norm
          << ',' << s.violations << ',' << (s.failure ? s.failure->message : "ok") << '\n';
      code = worst(code, exit_code(s));
    }
    return code;
  });
}

}  // namespace stc::cli
