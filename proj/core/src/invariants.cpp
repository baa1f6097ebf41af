#include "stc/invariants.hpp"

#include <cmath>
#include <sstream>

#include "stc/trigger.hpp"

namespace stc {

std::string_view to_string(SampleRole role) {
  switch (role) {
    case SampleRole::flow: return "flow";
    case SampleRole::pre_sample: return "pre_sample";
    case SampleRole::post_sample: return "post_sample";
    case SampleRole::pre_update: return "pre_update";
    case SampleRole::post_update: return "post_update";
  }
  return "unknown";
}

std::string_view to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::flow_decay: return "flow_decay";
    case InvariantKind::update_nonincrease: return "update_nonincrease";
    case InvariantKind::sample_bound: return "sample_bound";
    case InvariantKind::window_decrease: return "window_decrease";
    case InvariantKind::eta_constant: return "eta_constant";
  }
  return "unknown";
}

std::size_t InvariantReport::total_checks() const {
  std::size_t n = 0;
  for (auto c : checks) n += c;
  return n;
}

std::string InvariantReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < kInvariantKinds; ++i) {
    if (i) os << ", ";
    os << to_string(static_cast<InvariantKind>(i)) << " " << failures[i] << "/" << checks[i];
  }
  return os.str();
}

InvariantChecker::InvariantChecker(const TriggerConfig& cfg, double tolerance)
    : cfg_(&cfg), tolerance_(tolerance) {}

void InvariantChecker::check(InvariantKind kind, const CheckPoint& point, double lhs,
                             double rhs) {
  const auto i = static_cast<std::size_t>(kind);
  ++report_.checks[i];
  if (lhs <= rhs * (1.0 + tolerance_)) return;
  ++report_.failures[i];
  if (report_.violations.size() < kMaxStored) {
    report_.violations.push_back({kind, point.t, point.j, lhs, rhs});
  }
}

void InvariantChecker::observe(const CheckPoint& point) {
  if (point.role == SampleRole::post_sample) {
    if (open_) {
      const double elapsed = point.t - t_k_;
      check(InvariantKind::sample_bound, point, point.u1, std::exp(-eps_ * elapsed) * u_start_);
      const double eps1 = cfg_->reference().eps;
      const double base = start_.fallback
                              ? start_.u1_plus
                              : (start_.u1_plus + start_.eta_sum) /
                                    static_cast<double>(cfg_->settings.m);
      check(InvariantKind::window_decrease, point, point.u1, std::exp(-eps1 * elapsed) * base);
    }
    open_ = true;
    t_k_ = point.t;
    u_start_ = point.u_chosen;
    start_ = point.start;
    eps_ = cfg_->sets.at(start_.chosen).eps;
    eta_norm_ = point.eta_norm;
    last_u_ = point.u_chosen;
    return;
  }
  if (!open_) return;

  check(InvariantKind::flow_decay, point, point.u_chosen,
        std::exp(-eps_ * (point.t - t_k_)) * u_start_);
  check(InvariantKind::eta_constant, point, std::abs(point.eta_norm - eta_norm_),
        1e-12 * eta_norm_);
  if (point.role == SampleRole::post_update) {
    check(InvariantKind::update_nonincrease, point, point.u_chosen, last_u_);
  }
  last_u_ = point.u_chosen;
}

}  // namespace stc
