#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stc/experiment.hpp"
#include "stc/log.hpp"
#include "stc/paramgen.hpp"

namespace {

void add_family(CLI::App* cmd, stc::cli::FamilySource& source) {
  cmd->add_option("--config", source.config_path,
                  "Family file written by paramgen (default: synthesise the built-in family)");
  cmd->add_option("--m", source.m, "Window length m")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  stc::init_logging();
  CLI::App app{"Self-triggered control under transmission delays"};
  app.require_subcommand(1);

  stc::cli::SimulateArgs sim;
  std::string sim_prefix;
  auto* simulate = app.add_subcommand("simulate", "Run the closed loop and write CSV traces");
  add_family(simulate, sim.family);
  simulate->add_option("--x0", sim.x0, "Initial plant state");
  simulate->add_option("--horizon", sim.horizon, "Simulated time in seconds");
  simulate->add_option("--delay", sim.delay,
                       "zero | constant:<d> | uniform:<lo>:<hi>:<seed> | file:<path> "
                       "(default: constant tau_mad)");
  simulate->add_option("--out", sim_prefix, "Prefix for <prefix>_trace.csv, _events.csv, _summary.txt");
  simulate->add_option("--flow-step", sim.flow_step, "RK4 step (default t_min / 200)");
  simulate->add_option("--record-every", sim.record_every, "Keep every n-th flow step");
  simulate->add_flag("--periodic", sim.periodic, "Sample periodically with t_min");

  stc::cli::CompareArgs cmp;
  std::string cmp_prefix;
  auto* compare = app.add_subcommand("compare", "Self-triggered versus periodic sampling");
  add_family(compare, cmp.family);
  compare->add_option("--x0", cmp.x0, "Initial plant state");
  compare->add_option("--horizon", cmp.horizon, "Simulated time in seconds");
  compare->add_option("--delay", cmp.delay, "Delay model (default: constant tau_mad)");
  compare->add_option("--out", cmp_prefix, "Prefix for CSV output of both runs");

  stc::cli::ParamgenArgs gen;
  double roa = 0.0;
  auto* paramgen = app.add_subcommand("paramgen", "Synthesise the parameter family");
  paramgen->add_option("--eps", gen.eps, "Decay rates (default: 22 values in [-50, 0.01])");
  paramgen->add_option("--lambda", gen.settings.lambda, "lambda in (0, 1)");
  paramgen->add_option("--c-x", gen.settings.c_x, "Level set bound c_x");
  paramgen->add_option("--m", gen.settings.m, "Window length m");
  paramgen->add_option("--tau-mad", gen.settings.tau_mad, "Maximum allowable delay");
  paramgen->add_option("--roa-state", roa,
                       "Cap c_u so that this state lies in the region of attraction");
  paramgen->add_option("-o,--out", gen.out_path, "Output family file");

  stc::cli::TmaxArgs tm;
  std::string tm_out;
  auto* tmax = app.add_subcommand("tmax", "T_max per set and phi curves");
  add_family(tmax, tm.family);
  tmax->add_option("--set", tm.set, "1-based set index for the curve (default 1)");
  tmax->add_option("--points", tm.points, "Curve resolution");
  tmax->add_option("-o,--out", tm_out, "CSV with tau, phi0, phi1");

  stc::cli::ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Grid check of the storage inequalities");
  add_family(validate, val.family);
  validate->add_option("--grid", val.grid_n, "Grid points per axis (>= 50)");

  stc::cli::SweepArgs sw;
  std::string sw_prefix;
  auto* sweep = app.add_subcommand("sweep", "Runs from many initial states in parallel");
  add_family(sweep, sw.family);
  sweep->add_option("--x0", sw.x0, "Initial states (default: spread over the region)");
  sweep->add_option("--count", sw.count, "Number of default initial states");
  sweep->add_option("--horizon", sw.horizon, "Simulated time in seconds");
  sweep->add_option("--delay", sw.delay, "Delay model (default: constant tau_mad)");
  sweep->add_option("--jobs", sw.jobs, "Concurrent runs (default: hardware threads)");
  sweep->add_option("--out", sw_prefix, "Prefix for per-run output");

  CLI11_PARSE(app, argc, argv);

  auto opt = [](const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
  };
  if (*simulate) {
    sim.out_prefix = opt(sim_prefix);
    return stc::cli::cmd_simulate(sim, std::cout);
  }
  if (*compare) {
    cmp.out_prefix = opt(cmp_prefix);
    return stc::cli::cmd_compare(cmp, std::cout);
  }
  if (*paramgen) {
    if (paramgen->count("--roa-state")) gen.roa_reference = roa;
    return stc::cli::cmd_paramgen(gen, std::cout);
  }
  if (*tmax) {
    tm.out_path = opt(tm_out);
    return stc::cli::cmd_tmax(tm, std::cout);
  }
  if (*validate) return stc::cli::cmd_validate(val, std::cout);
  sw.out_prefix = opt(sw_prefix);
  return stc::cli::cmd_sweep(sw, std::cout);
}
