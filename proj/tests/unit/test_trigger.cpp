#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "stc/errors.hpp"
#include "stc/trigger.hpp"

using namespace stc;
using stc::test::bundle;
using stc::test::family;

namespace {

struct Expected {
  double tau;
  std::size_t chosen;
  bool fallback;
};

/// Independent evaluation of the selection rule: every candidate interval is
/// found by bisection on the linear-form inequality
///   exp(-eps_p tau) U_p <= exp(-eps_1 tau) C
/// instead of the closed-form logarithm.
Expected oracle(const TriggerConfig& cfg, double x, double e, const std::vector<double>& eta) {
  const double c_x = cfg.settings.c_x;
  auto u_plus = [&](const ParameterSet& p) {
    const double w = cfg.settings.lambda * std::abs(e);
    return 0.505 * x * x + p.gamma1 * p.phi1_init * w * w;
  };
  double sum = 0.0;
  for (double v : eta) sum += v;
  const double c =
      std::min(c_x, (u_plus(cfg.sets[0]) + sum) / static_cast<double>(cfg.settings.m));

  Expected best{-1.0, 0, true};
  for (std::size_t p = 1; p < cfg.set_count(); ++p) {
    const ParameterSet& set = cfg.sets[p];
    const double u = u_plus(set);
    if (u > c || u >= c_x || !(cfg.t_max[p] > 0.0)) continue;
    auto ok = [&](double tau) {
      return std::exp(-set.eps * tau) * u <= std::exp(-cfg.sets[0].eps * tau) * c;
    };
    double tau = cfg.t_max[p];
    if (!ok(tau)) {
      double lo = 0.0, hi = tau;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
      }
      tau = lo;
    }
    if (!(std::max(1.0, std::exp(-set.eps * tau)) * u < c_x)) continue;
    if (tau > best.tau) best = {tau, p, false};
  }
  if (best.tau < cfg.t_min) return {cfg.t_min, 0, true};
  return best;
}

TriggerConfig subset(std::vector<std::size_t> idx) {
  std::vector<ParameterSet> sets;
  for (auto i : idx) sets.push_back(family().sets[i]);
  return make_trigger_config(family().settings, sets);
}

}  // namespace

TEST(Trigger, FamilyShape) {
  const TriggerConfig& cfg = family();
  EXPECT_EQ(cfg.set_count(), 22u);
  EXPECT_DOUBLE_EQ(cfg.reference().eps, 0.01);
  EXPECT_DOUBLE_EQ(cfg.c_u, cfg.sets[0].gamma1 * cfg.sets[0].phi1_init);
  EXPECT_EQ(cfg.t_min, cfg.t_max[0]);
  EXPECT_GE(cfg.t_min, cfg.settings.tau_mad);
  EXPECT_EQ(cfg.eta_size(), 29u);
}

TEST(Trigger, OriginGetsLongestInterval) {
  const TriggerConfig& cfg = family();
  const double z[1] = {0.0};
  const std::vector<double> eta(cfg.eta_size(), 0.0);
  const TriggerDecision d = gamma_trigger(cfg, bundle(), z, z, eta);
  EXPECT_FALSE(d.fallback);
  EXPECT_DOUBLE_EQ(d.tau_max, cfg.max_t_max());
  EXPECT_EQ(d.u_chosen_plus, 0.0);
}

TEST(Trigger, MatchesIndependentOracle) {
  const TriggerConfig& cfg = family();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-0.2, 0.2), ue(-0.05, 0.05), ueta(0.0, 3.0);
  int non_fallback = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double x = ux(rng), e = ue(rng);
    std::vector<double> eta(cfg.eta_size());
    for (auto& v : eta) v = ueta(rng);
    const double xv[1] = {x};
    const double ev[1] = {e};
    const Expected want = oracle(cfg, x, e, eta);
    TriggerDecision got;
    try {
      got = gamma_trigger(cfg, bundle(), xv, ev, eta);
    } catch (const OutOfRegionError&) {
      EXPECT_TRUE(want.fallback);
      continue;
    }
    ASSERT_EQ(got.fallback, want.fallback) << "trial " << trial;
    ASSERT_EQ(got.chosen, want.chosen) << "trial " << trial;
    ASSERT_NEAR(got.tau_max, want.tau, 1e-9 * want.tau) << "trial " << trial;
    EXPECT_GE(got.tau_max, cfg.t_min);
    EXPECT_LE(got.tau_max, cfg.t_max[got.chosen]);
    non_fallback += got.fallback ? 0 : 1;
  }
  EXPECT_GT(non_fallback, 50);
}

TEST(Trigger, SingleSetIsPeriodic) {
  const TriggerConfig cfg = subset({0});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 50; ++i) {
    const double x[1] = {u(rng)};
    const double e[1] = {u(rng)};
    const std::vector<double> eta(cfg.eta_size(), 1.0);
    const TriggerDecision d = gamma_trigger(cfg, bundle(), x, e, eta);
    EXPECT_TRUE(d.fallback);
    EXPECT_EQ(d.chosen, 0u);
    EXPECT_EQ(d.tau_max, cfg.t_min);
  }
}

TEST(Trigger, TiesGoToLowerIndex) {
  const TriggerConfig cfg = subset({0, 21, 21});
  const double z[1] = {0.0};
  const std::vector<double> eta(cfg.eta_size(), 0.0);
  EXPECT_EQ(gamma_trigger(cfg, bundle(), z, z, eta).chosen, 1u);
}

TEST(Trigger, OutsideRegionThrows) {
  const TriggerConfig& cfg = family();
  const double x[1] = {2.0};
  const double e[1] = {-2.0};
  const std::vector<double> eta(cfg.eta_size(), 0.0);
  EXPECT_THROW(gamma_trigger(cfg, bundle(), x, e, eta), OutOfRegionError);
  EXPECT_THROW(periodic_trigger(cfg, bundle(), x, e), OutOfRegionError);
}

TEST(Trigger, PeriodicBaseline) {
  const TriggerConfig& cfg = family();
  const double x[1] = {0.1};
  const double e[1] = {0.01};
  const TriggerDecision d = periodic_trigger(cfg, bundle(), x, e);
  EXPECT_TRUE(d.fallback);
  EXPECT_EQ(d.tau_max, cfg.t_min);
}

TEST(Trigger, WindowShift) {
  const TriggerConfig cfg = [] {
    TriggerSettings s = family().settings;
    s.m = 4;
    return make_trigger_config(s, family().sets);
  }();
  const double x[1] = {0.1};
  const double e[1] = {0.02};
  const std::vector<double> eta{1.0, 2.0, 3.0};
  const Vec next = update_eta(cfg, bundle(), eta, x, e);
  ASSERT_EQ(next.size(), 3u);
  EXPECT_EQ(next[0], 2.0);
  EXPECT_EQ(next[1], 3.0);
  EXPECT_DOUBLE_EQ(next[2], 0.505 * 0.01 + cfg.c_u * 0.004 * 0.004);
  EXPECT_THROW(update_eta(cfg, bundle(), std::vector<double>{1.0}, x, e), ConfigError);
}

TEST(Trigger, ConfigValidation) {
  const auto& sets = family().sets;
  TriggerSettings s = family().settings;
  EXPECT_THROW(make_trigger_config(s, {}), ConfigError);
  EXPECT_THROW(make_trigger_config(s, {sets[2]}), ConfigError);  // eps = 0
  s.lambda = 1.0;
  EXPECT_THROW(make_trigger_config(s, sets), ConfigError);
  s = family().settings;
  s.tau_mad = 0.05;
  EXPECT_THROW(make_trigger_config(s, sets), ConfigError);
  s = family().settings;
  s.m = 0;
  EXPECT_THROW(make_trigger_config(s, sets), ConfigError);
}
