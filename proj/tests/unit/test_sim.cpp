#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "stc/errors.hpp"
#include "stc/sim.hpp"

using namespace stc;
using stc::test::bundle;
using stc::test::family;
using stc::test::kInside;
using stc::test::plant;

namespace {

SimulationResult run(double x0, DelayModel delay, double horizon = 1.0,
                     SimulationOptions options = {}) {
  options.horizon = horizon;
  const Vec x{x0};
  return simulate(plant(), family(), bundle(), x, std::move(delay), options);
}

}  // namespace

TEST(Sim, FlowStepAtOriginOnlyAdvancesClock) {
  HybridState xi{{0.0}, {0.0}, {0.0}, Vec(29, 0.0), 0.25, 1.0, 0};
  const HybridState next = flow_step(plant(), xi, 1e-3);
  EXPECT_EQ(next.x[0], 0.0);
  EXPECT_EQ(next.e[0], 0.0);
  EXPECT_DOUBLE_EQ(next.tau, 0.251);
}

TEST(Sim, FlowKeepsHeldSampleAndMemory) {
  HybridState xi{{1.3}, {-0.4}, {0.7}, Vec(29, 2.0), 0.0, 1.0, 0};
  const double held = xi.x[0] + xi.e[0];
  for (int i = 0; i < 1000; ++i) {
    xi = flow_step(plant(), xi, 1e-4);
    ASSERT_NEAR(xi.x[0] + xi.e[0], held, 1e-12);
  }
  EXPECT_EQ(xi.s[0], 0.7);
  EXPECT_EQ(xi.eta, Vec(29, 2.0));
  EXPECT_EQ(xi.tau_max, 1.0);
}

TEST(Sim, InitialStateAndFirstUpdate) {
  const Vec x0{kInside};
  TriggerDecision d;
  const HybridState xi = initial_state(plant(), family(), bundle(), x0, std::nullopt,
                                       TriggerMode::self_triggered, &d);
  EXPECT_EQ(xi.e[0], -kInside);
  EXPECT_EQ(xi.s[0], kInside);
  EXPECT_EQ(xi.ell, 1);
  EXPECT_EQ(xi.tau, 0.0);
  EXPECT_EQ(xi.tau_max, d.tau_max);
  const double u1 = window_value(family(), bundle(), xi.x, xi.e);
  for (double v : xi.eta) EXPECT_EQ(v, u1);

  const JumpOutcome up = jump(family(), bundle(), plant(), xi);
  EXPECT_EQ(up.event.kind, EventKind::update);
  EXPECT_EQ(up.state.e[0], 0.0);
  EXPECT_EQ(up.state.s[0], 0.0);
  EXPECT_EQ(up.state.ell, 0);
}

TEST(Sim, SamplingJumpKeepsPlantState) {
  HybridState xi{{0.1}, {0.03}, {0.5}, Vec(29, 0.4), 0.004, 0.004, 0};
  const JumpOutcome out = jump(family(), bundle(), plant(), xi);
  EXPECT_EQ(out.event.kind, EventKind::sample);
  EXPECT_EQ(out.state.x, xi.x);
  EXPECT_EQ(out.state.e, xi.e);
  EXPECT_EQ(out.state.s[0], -0.03);
  EXPECT_EQ(out.state.ell, 1);
  EXPECT_EQ(out.state.tau, 0.0);
  EXPECT_EQ(out.state.tau_max, out.event.value);
  EXPECT_EQ(out.state.eta.back(), window_value(family(), bundle(), xi.x, xi.e));
}

TEST(Sim, UpdateInstallsNewHoldError) {
  // Sample at x = 0.1, then flow until the update: e+ = x(t_k) - x(t).
  HybridState xi{{0.1}, {0.02}, {0.0}, Vec(29, 0.4), 0.0, 0.005, 0};
  xi = jump(family(), bundle(), plant(), xi).state;
  for (int i = 0; i < 20; ++i) xi = flow_step(plant(), xi, 2e-5);
  const HybridState up = jump(family(), bundle(), plant(), xi).state;
  EXPECT_NEAR(up.e[0], 0.1 - xi.x[0], 1e-15);
  EXPECT_NEAR(up.s[0], -up.e[0], 0.0);
}

TEST(Sim, OriginStaysAtOrigin) {
  const SimulationResult r = run(0.0, DelayModel::constant(4e-4));
  ASSERT_TRUE(r.ok());
  for (std::size_t i = 0; i < r.trace.samples.size(); ++i) {
    ASSERT_EQ(r.trace.x(i)[0], 0.0);
    ASSERT_EQ(r.trace.e(i)[0], 0.0);
    ASSERT_EQ(r.trace.s(i)[0], 0.0);
  }
  for (double tau : r.trace.sampling_intervals()) {
    EXPECT_DOUBLE_EQ(tau, family().max_t_max());
  }
  const auto n = static_cast<std::size_t>(std::floor(1.0 / family().max_t_max())) + 1;
  EXPECT_EQ(r.trace.sampling_count(), n);
}

TEST(Sim, EventsAlternateStartingWithUpdate) {
  const SimulationResult r = run(kInside, DelayModel::uniform(0.0, 4e-4, 9));
  ASSERT_TRUE(r.ok()) << r.report.summary();
  ASSERT_FALSE(r.trace.events.empty());
  for (std::size_t i = 0; i < r.trace.events.size(); ++i) {
    const Event& ev = r.trace.events[i];
    EXPECT_EQ(ev.k, i + 1);
    EXPECT_EQ(ev.kind, i % 2 == 0 ? EventKind::update : EventKind::sample);
    if (ev.kind == EventKind::update) EXPECT_LE(ev.value, 4e-4);
  }
}

TEST(Sim, HybridTimeStrictlyIncreases) {
  const SimulationResult r = run(kInside, DelayModel::zero(), 0.5);
  ASSERT_TRUE(r.ok());
  for (std::size_t i = 1; i < r.trace.samples.size(); ++i) {
    ASSERT_LT(r.trace.samples[i - 1].time, r.trace.samples[i].time) << i;
  }
}

TEST(Sim, HeldSampleConstantBetweenUpdates) {
  const SimulationResult r = run(kInside, DelayModel::constant(4e-4));
  ASSERT_TRUE(r.ok());
  const auto& tr = r.trace;
  double held = tr.x(0)[0] + tr.e(0)[0];
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    if (tr.samples[i].role == SampleRole::post_update) {
      held = tr.x(i)[0] + tr.e(i)[0];
      continue;
    }
    ASSERT_NEAR(tr.x(i)[0] + tr.e(i)[0], held, 1e-9) << i;
  }
}

TEST(Sim, IntervalsStayWithinCertifiedRange) {
  const SimulationResult r = run(-kInside, DelayModel::constant(4e-4), 3.0);
  ASSERT_TRUE(r.ok()) << r.report.summary();
  for (double tau : r.trace.sampling_intervals()) {
    EXPECT_GE(tau, family().t_min);
    EXPECT_LE(tau, family().max_t_max());
  }
}

TEST(Sim, OnlineAndOfflineChecksAgree) {
  SimulationOptions o;
  o.tolerance = 1e-6;
  const SimulationResult r = run(kInside, DelayModel::constant(4e-4), 1.0, o);
  ASSERT_TRUE(r.ok());
  const InvariantReport offline = check_invariants(r.trace, family(), bundle());
  EXPECT_TRUE(offline.ok());
  EXPECT_EQ(offline.checks, r.report.checks);
  for (std::size_t k = 0; k < kInvariantKinds; ++k) EXPECT_GT(offline.checks[k], 0u) << k;
}

TEST(Sim, CorruptedSampleIsDetectedOnce) {
  const SimulationResult r = run(kInside, DelayModel::constant(4e-4), 0.5);
  ASSERT_TRUE(r.ok());
  SolutionTrace trace = r.trace;
  // First flow sample after the second sampling instant.
  std::size_t hit = 0;
  int posts = 0;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (trace.samples[i].role == SampleRole::post_sample) ++posts;
    if (posts == 2 && trace.samples[i].role == SampleRole::flow) {
      hit = i;
      break;
    }
  }
  ASSERT_GT(hit, 0u);
  trace.samples[hit].u_chosen *= 1.01;
  const InvariantReport rep = check_invariants(trace, family(), bundle());
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].kind, InvariantKind::flow_decay);
  EXPECT_EQ(rep.violations[0].t, trace.samples[hit].time.t);
}

TEST(Sim, StepHalvingMovesEndpointLittle) {
  SimulationOptions coarse;
  SimulationOptions fine;
  fine.flow_step = family().t_min / 400.0;
  const SimulationResult a = run(kInside, DelayModel::constant(4e-4), 1.0, coarse);
  const SimulationResult b = run(kInside, DelayModel::constant(4e-4), 1.0, fine);
  ASSERT_TRUE(a.ok() && b.ok());
  const double xa = a.final_state.x[0];
  const double xb = b.final_state.x[0];
  EXPECT_LT(std::abs(xa - xb), 1e-6 * std::abs(xb));
}

TEST(Sim, RandomDelaysAreReproducible) {
  const SimulationResult a = run(kInside, DelayModel::uniform(0.0, 4e-4, 42));
  const SimulationResult b = run(kInside, DelayModel::uniform(0.0, 4e-4, 42));
  ASSERT_EQ(a.trace.events.size(), b.trace.events.size());
  for (std::size_t i = 0; i < a.trace.events.size(); ++i) {
    EXPECT_EQ(a.trace.events[i].value, b.trace.events[i].value);
  }
  EXPECT_EQ(a.final_state.x, b.final_state.x);
}

TEST(Sim, OutsideRegionStopsWithFailure) {
  const SimulationResult r = run(2.0, DelayModel::constant(4e-4));
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->kind, FailureKind::out_of_region);
  EXPECT_FALSE(r.ok());
}

TEST(Sim, DecimationKeepsJumps) {
  SimulationOptions o;
  o.record_every = 50;
  const SimulationResult r = run(kInside, DelayModel::constant(4e-4), 0.5, o);
  ASSERT_TRUE(r.ok());
  std::size_t posts = 0;
  for (const auto& s : r.trace.samples) {
    posts += s.role == SampleRole::post_sample || s.role == SampleRole::post_update;
  }
  EXPECT_EQ(posts, r.trace.events.size() + 1);
}

TEST(Sim, RejectsBadInputs) {
  EXPECT_THROW(run(kInside, DelayModel::constant(1e-3)), ConfigError);
  EXPECT_THROW(run(kInside, DelayModel::zero(), 0.0), ConfigError);
}
