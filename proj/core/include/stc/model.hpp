#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stc {

using Vec = std::vector<double>;

/// Axis-aligned box [lower, upper] in R^n.
struct Box {
  Vec lower;
  Vec upper;

  [[nodiscard]] std::size_t dim() const { return lower.size(); }
  [[nodiscard]] bool contains(std::span<const double> v) const;
  static Box symmetric(std::size_t dim, double radius);
};

/// Closed-loop plant in error coordinates.
///
/// `drift` writes f(x, e) = f_p(x, k(x + e)) into `out`; the error dynamics are
/// fixed to g(x, e) = -f(x, e) because the held state x + e does not move
/// between input updates.
struct PlantModel {
  using Drift = std::function<void(std::span<const double> x,
                                   std::span<const double> e,
                                   std::span<double> out)>;

  std::string name;
  std::size_t state_dim = 0;
  Drift drift;
  Box x_set;
  Box e_set;
};

/// Evaluates f(x, e). Throws DomainError on non-finite output or mismatched
/// dimensions.
Vec eval_f(const PlantModel& plant, std::span<const double> x,
           std::span<const double> e);

/// Evaluates g(x, e) = -f(x, e).
Vec eval_g(const PlantModel& plant, std::span<const double> x,
           std::span<const double> e);

namespace example {

inline constexpr double kVCoeff = 0.505;
inline constexpr double kA3Bound = 37.0;
inline constexpr double kXRadius = 3.0;
inline constexpr double kERadius = 6.0;

/// x' = -x sin^2(x^2) + u cos(x^2) with u = -(x+e) cos((x+e)^2).
double drift(double x, double e);

/// Effective uncertainty a3(x, e) = -(f(x, e) + x) / e of the embedding
/// f = -x - e a3. Defined as 0 at e = 0, where f(x, 0) = -x.
double effective_a3(double x, double e);

}  // namespace example

/// The scalar example plant on X = [-3, 3], E = [-6, 6].
PlantModel example_scalar_plant();

/// Looks up a built-in plant; throws ConfigError for unknown names.
PlantModel plant_by_name(std::string_view name);

}  // namespace stc
