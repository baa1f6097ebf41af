#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stc {

struct TriggerConfig;

/// Where a recorded point sits relative to the jumps of the hybrid system.
enum class SampleRole { flow, pre_sample, post_sample, pre_update, post_update };

std::string_view to_string(SampleRole role);

enum class InvariantKind {
  /// U_p(t) <= exp(-eps_p (t - t_k)) U_p(t_k+) inside an interval.
  flow_decay,
  /// U_p does not increase across the input update.
  update_nonincrease,
  /// V~ + c_u W~(1, e+, s+)^2 <= exp(-eps_p D) U_p(t_k+) at the next sample.
  sample_bound,
  /// Windowed average decrease of U_1 (or plain decrease on fallback).
  window_decrease,
  /// |eta| is constant between sampling instants.
  eta_constant,
};

inline constexpr std::size_t kInvariantKinds = 5;

std::string_view to_string(InvariantKind kind);

struct Violation {
  InvariantKind kind;
  double t = 0.0;
  std::uint64_t j = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct InvariantReport {
  std::vector<Violation> violations;
  std::array<std::size_t, kInvariantKinds> checks{};
  std::array<std::size_t, kInvariantKinds> failures{};

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::size_t total_checks() const;
  [[nodiscard]] std::string summary() const;
};

/// Facts about a sampling instant needed to close the interval that starts
/// there.
struct IntervalStart {
  std::size_t chosen = 0;
  bool fallback = true;
  /// U_1 right after the jump.
  double u1_plus = 0.0;
  /// Sum of the window before the jump.
  double eta_sum = 0.0;
};

/// One observation fed to the checker.
struct CheckPoint {
  double t = 0.0;
  std::uint64_t j = 0;
  SampleRole role = SampleRole::flow;
  /// U of the set that governs the current interval.
  double u_chosen = 0.0;
  double u1 = 0.0;
  double eta_norm = 0.0;
  /// Set only for post_sample points.
  IntervalStart start;
};

/// Online checker for the decrease guarantees along a simulated trajectory.
/// Feed points in hybrid-time order; the first point must be a post_sample.
/// A post_update point is compared with the point observed just before it.
class InvariantChecker {
 public:
  InvariantChecker(const TriggerConfig& cfg, double tolerance);

  void observe(const CheckPoint& point);
  [[nodiscard]] const InvariantReport& report() const { return report_; }

  /// At most this many violations are stored; all are counted.
  static constexpr std::size_t kMaxStored = 1000;

 private:
  void check(InvariantKind kind, const CheckPoint& point, double lhs, double rhs);

  const TriggerConfig* cfg_;
  double tolerance_;
  bool open_ = false;
  double t_k_ = 0.0;
  double u_start_ = 0.0;
  double eps_ = 0.0;
  IntervalStart start_;
  double eta_norm_ = 0.0;
  /// u_chosen of the previous point, compared across an update.
  double last_u_ = 0.0;
  InvariantReport report_;
};

}  // namespace stc
