#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "stc/config.hpp"
#include "stc/experiment.hpp"

using namespace stc;
using namespace stc::cli;

namespace {

const std::string& family_path() {
  static const std::string path = [] {
    const std::string p = testing::TempDir() + "stc_cli_family.toml";
    write_family(p, to_family(stc::test::family()));
    return p;
  }();
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Cli, SimulateOriginSucceeds) {
  SimulateArgs a;
  a.family.config_path = family_path();
  a.x0 = {0.0};
  a.horizon = 1.0;
  std::ostringstream out;
  EXPECT_EQ(cmd_simulate(a, out), kExitOk) << out.str();
  const auto n = static_cast<std::size_t>(std::floor(1.0 / stc::test::family().max_t_max())) + 1;
  EXPECT_NE(out.str().find("sampling instants: " + std::to_string(n)), std::string::npos)
      << out.str();
}

TEST(Cli, ExitCodes) {
  std::ostringstream out;
  SimulateArgs outside;
  outside.family.config_path = family_path();
  outside.x0 = {5.0};
  EXPECT_EQ(cmd_simulate(outside, out), kExitOutOfRegion);

  SimulateArgs missing;
  missing.family.config_path = "/nonexistent/family.toml";
  EXPECT_EQ(cmd_simulate(missing, out), kExitConfig);

  SimulateArgs wrong_dim;
  wrong_dim.family.config_path = family_path();
  wrong_dim.x0 = {0.1, 0.2};
  EXPECT_EQ(cmd_simulate(wrong_dim, out), kExitError);

  ValidateArgs v;
  v.family.config_path = family_path();
  v.grid_n = 10;
  EXPECT_EQ(cmd_validate(v, out), kExitConfig);
}

TEST(Cli, InvariantViolationsGiveExitFour) {
  RunSummary s;
  s.violations = 1;
  EXPECT_EQ(exit_code(s), kExitInvariant);
  s.failure = SimulationFailure{FailureKind::integration, "x"};
  EXPECT_EQ(exit_code(s), kExitError);
}

TEST(Cli, CompareAtOrigin) {
  CompareArgs a;
  a.x0 = {0.0};
  a.horizon = 1.0;
  const LoadedFamily fam = load_family({family_path(), std::nullopt});
  const CompareResult r = run_compare(fam, a);
  const double expected = fam.cfg.t_min / fam.cfg.max_t_max();
  // Counts include the sample at t = 0 and are rounded to whole intervals.
  EXPECT_NEAR(r.ratio(), expected, 2.0 / static_cast<double>(r.periodic.samples));
}

TEST(Cli, CompareIsDeterministic) {
  const std::string p1 = testing::TempDir() + "stc_cmp_a";
  const std::string p2 = testing::TempDir() + "stc_cmp_b";
  CompareArgs a;
  a.family.config_path = family_path();
  a.x0 = {0.1};
  a.horizon = 0.3;
  a.delay = "uniform:0:0.0004:17";
  std::ostringstream o1, o2;
  a.out_prefix = p1;
  ASSERT_EQ(cmd_compare(a, o1), kExitOk) << o1.str();
  a.out_prefix = p2;
  ASSERT_EQ(cmd_compare(a, o2), kExitOk);
  EXPECT_EQ(o1.str(), o2.str());
  for (const char* suffix : {"_stc_trace.csv", "_stc_events.csv", "_periodic_trace.csv"}) {
    const std::string a1 = slurp(p1 + suffix);
    EXPECT_FALSE(a1.empty());
    EXPECT_EQ(a1, slurp(p2 + suffix)) << suffix;
  }
}

TEST(Cli, MOverride) {
  const LoadedFamily fam = load_family({family_path(), 5});
  EXPECT_EQ(fam.cfg.settings.m, 5u);
  EXPECT_EQ(fam.cfg.eta_size(), 4u);
}

TEST(Cli, ParamgenTmaxValidate) {
  const std::string path = testing::TempDir() + "stc_gen.toml";
  ParamgenArgs g;
  g.eps = {0.01, -1.0, -50.0};
  g.out_path = path;
  std::ostringstream out;
  ASSERT_EQ(cmd_paramgen(g, out), kExitOk) << out.str();
  const FamilyFile f = read_family(path);
  EXPECT_EQ(f.sets.size(), 3u);

  TmaxArgs t;
  t.family.config_path = path;
  t.set = 3;
  t.points = 11;
  t.out_path = testing::TempDir() + "stc_phi.csv";
  ASSERT_EQ(cmd_tmax(t, out), kExitOk);
  std::istringstream csv(slurp(*t.out_path));
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line, "tau,phi0,phi1");
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 11u);
  t.set = 4;
  EXPECT_EQ(cmd_tmax(t, out), kExitConfig);

  ValidateArgs v;
  v.family.config_path = path;
  v.grid_n = 50;
  EXPECT_EQ(cmd_validate(v, out), kExitOk);

  ParamgenArgs infeasible;
  infeasible.eps = {0.02};
  infeasible.out_path = testing::TempDir() + "stc_never.toml";
  EXPECT_EQ(cmd_paramgen(infeasible, out), kExitConfig);
}

TEST(Cli, SweepOverRegion) {
  SweepArgs s;
  s.family.config_path = family_path();
  s.count = 3;
  s.horizon = 0.5;
  s.jobs = 2;
  std::ostringstream out;
  EXPECT_EQ(cmd_sweep(s, out), kExitOk) << out.str();
  const auto xs = region_samples(stc::test::family(), stc::test::bundle(), 3);
  EXPECT_DOUBLE_EQ(xs[0], -xs[2]);
  EXPECT_EQ(xs[1], 0.0);
}
