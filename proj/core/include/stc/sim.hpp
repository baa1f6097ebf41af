#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stc/delay.hpp"
#include "stc/invariants.hpp"
#include "stc/model.hpp"
#include "stc/storage.hpp"
#include "stc/trigger.hpp"

namespace stc {

/// xi = (x, e, s, eta, tau, tau_max, ell).
///
/// ell = 0: waiting for the next sampling instant (flows while
/// tau <= tau_max). ell = 1: a sample is in transit (flows while
/// tau <= tau_mad).
struct HybridState {
  Vec x;
  Vec e;
  Vec s;
  Vec eta;
  double tau = 0.0;
  double tau_max = 0.0;
  int ell = 1;
};

/// Hybrid time (t, j), ordered lexicographically.
struct HybridTime {
  double t = 0.0;
  std::uint64_t j = 0;

  friend auto operator<=>(const HybridTime&, const HybridTime&) = default;
};

enum class EventKind { sample, update };

struct Event {
  /// Even for sampling instants, odd for updates. The initial condition is
  /// the sample k = 0 (SolutionTrace::initial); the list starts at k = 1.
  std::uint64_t k = 0;
  double t = 0.0;
  EventKind kind = EventKind::sample;
  /// tau_max chosen at a sample, the delay tau_k at an update.
  double value = 0.0;
  std::size_t chosen = 0;
  bool fallback = false;
  /// At samples: U_1 of the post-jump state and sum of the pre-jump window.
  double u1_plus = 0.0;
  double eta_sum = 0.0;
};

/// One recorded point of a hybrid trajectory. The plant parts (x, e, s) live
/// in SolutionTrace::states at offset index * 3 * n_x.
struct TraceSample {
  HybridTime time;
  int ell = 0;
  double tau = 0.0;
  double tau_max = 0.0;
  double u1 = 0.0;
  double u_chosen = 0.0;
  std::size_t chosen = 0;
  double eta_norm = 0.0;
  SampleRole role = SampleRole::flow;
};

struct SolutionTrace {
  std::size_t state_dim = 0;
  std::vector<TraceSample> samples;
  std::vector<double> states;
  /// Decision taken for the initial condition.
  Event initial;
  /// Jumps in order: update, sample, update, ...
  std::vector<Event> events;

  [[nodiscard]] std::span<const double> x(std::size_t i) const;
  [[nodiscard]] std::span<const double> e(std::size_t i) const;
  [[nodiscard]] std::span<const double> s(std::size_t i) const;
  [[nodiscard]] std::size_t sampling_count() const;
  /// Inter-sampling intervals chosen at every sampling instant.
  [[nodiscard]] std::vector<double> sampling_intervals() const;
};

enum class TriggerMode { self_triggered, periodic };

struct SimulationOptions {
  double horizon = 10.0;
  /// <= 0 selects t_min / 200.
  double flow_step = 0.0;
  /// Record every n-th flow step (jumps and the final state are always kept).
  std::size_t record_every = 1;
  bool check_online = true;
  double tolerance = 1e-6;
  /// Initial window; defaults to m - 1 copies of U_1 after the first sample.
  std::optional<Vec> eta0;
  TriggerMode mode = TriggerMode::self_triggered;
};

enum class FailureKind { out_of_region, integration, domain };

struct SimulationFailure {
  FailureKind kind;
  std::string message;
};

struct SimulationResult {
  SolutionTrace trace;
  InvariantReport report;
  std::optional<SimulationFailure> failure;
  HybridState final_state;

  [[nodiscard]] bool ok() const { return !failure && report.ok(); }
};

/// xi_0 = (x0, -x0, x0, eta0, 0, Gamma(x0, -x0, eta0), 1). Logs a warning when
/// x0 lies outside the region of attraction.
HybridState initial_state(const PlantModel& plant, const TriggerConfig& cfg,
                          const StorageBundle& bundle, std::span<const double> x0,
                          std::optional<Vec> eta0 = std::nullopt,
                          TriggerMode mode = TriggerMode::self_triggered,
                          TriggerDecision* decision = nullptr);

/// One RK4 step of the flow map; x + e is preserved, tau advances by h.
HybridState flow_step(const PlantModel& plant, const HybridState& xi, double h);

struct JumpOutcome {
  HybridState state;
  Event event;
};

/// Jump map. At a sample (ell = 0) the window is shifted and a new interval
/// chosen; at an update (ell = 1) the held input switches to the sample.
/// `delay` is not consumed here: the caller schedules the update time.
JumpOutcome jump(const TriggerConfig& cfg, const StorageBundle& bundle,
                 const PlantModel& plant, const HybridState& xi,
                 TriggerMode mode = TriggerMode::self_triggered);

SimulationResult simulate(const PlantModel& plant, const TriggerConfig& cfg,
                          const StorageBundle& bundle, std::span<const double> x0,
                          DelayModel delay, const SimulationOptions& options);

/// Replays a recorded trace through the invariant checker.
InvariantReport check_invariants(const SolutionTrace& trace,
                                 const TriggerConfig& cfg,
                                 const StorageBundle& bundle,
                                 double tolerance = 1e-6);

}  // namespace stc
