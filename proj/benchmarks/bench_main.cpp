#include <benchmark/benchmark.h>

#include <spdlog/spdlog.h>

#include "stc/paramgen.hpp"
#include "stc/phi.hpp"
#include "stc/sim.hpp"

using namespace stc;

namespace {

const TriggerConfig& family() {
  static const TriggerConfig cfg = [] {
    spdlog::set_level(spdlog::level::warn);
    return build_family(default_eps_grid(), FamilyOptions{});
  }();
  return cfg;
}

const StorageBundle& bundle() {
  static const StorageBundle b = make_quadratic_bundle(example::kVCoeff, 0.2);
  return b;
}

void BM_IntegratePhi(benchmark::State& state) {
  const auto& p = family().reference();
  const double step = default_phi_step(p, 4e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_phi(p.eps, p.gamma0, p.l0, p.phi0_init, family().t_min, step));
  }
}
BENCHMARK(BM_IntegratePhi);

void BM_Tmax(benchmark::State& state) {
  const auto& cfg = family();
  const auto& p = cfg.sets.back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        t_max(p, cfg.settings.lambda, cfg.c_u, cfg.settings.tau_mad, cfg.settings.horizon_cap));
  }
}
BENCHMARK(BM_Tmax);

void BM_GammaTrigger(benchmark::State& state) {
  const auto& cfg = family();
  const double x[1] = {0.1};
  const double e[1] = {0.002};
  const Vec eta(cfg.eta_size(), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_trigger(cfg, bundle(), x, e, eta));
  }
}
BENCHMARK(BM_GammaTrigger);

void BM_BuildFamily(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_family(default_eps_grid(), FamilyOptions{}));
  }
}
BENCHMARK(BM_BuildFamily)->Unit(benchmark::kMillisecond);

void BM_SimulateOneSecond(benchmark::State& state) {
  const PlantModel plant = example_scalar_plant();
  SimulationOptions o;
  o.horizon = 1.0;
  o.record_every = static_cast<std::size_t>(state.range(0));
  const Vec x0{0.15};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(plant, family(), bundle(), x0, DelayModel::constant(4e-4), o));
  }
}
BENCHMARK(BM_SimulateOneSecond)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
