#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace stc {

/// Source of transmission delays tau_k, one draw per sampling instant.
class DelayModel {
 public:
  enum class Kind { zero, constant, uniform, sequence };

  static DelayModel zero();
  static DelayModel constant(double d);
  static DelayModel uniform(double lo, double hi, std::uint64_t seed);
  /// Cycles through `values` when exhausted.
  static DelayModel sequence(std::vector<double> values);

  /// Parses `zero | constant:<d> | uniform:<lo>:<hi>:<seed> | file:<path>`.
  /// A file holds whitespace separated delays. Throws ConfigError.
  static DelayModel parse(std::string_view spec);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string describe() const;

  /// Throws ConfigError unless every delay the model can emit is in
  /// [0, tau_mad].
  void validate(double tau_mad) const;

  /// Next delay. Restarts deterministically after reset().
  double next();
  void reset();

 private:
  Kind kind_ = Kind::zero;
  double a_ = 0.0;
  double b_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
  std::size_t cursor_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace stc
