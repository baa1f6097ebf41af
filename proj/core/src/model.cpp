#include "stc/model.hpp"

#include <cmath>
#include <string>

#include "stc/errors.hpp"

namespace stc {

bool Box::contains(std::span<const double> v) const {
  if (v.size() != lower.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < lower[i] || v[i] > upper[i]) return false;
  }
  return true;
}

Box Box::symmetric(std::size_t dim, double radius) {
  return Box{Vec(dim, -radius), Vec(dim, radius)};
}

Vec eval_f(const PlantModel& plant, std::span<const double> x,
           std::span<const double> e) {
  if (x.size() != plant.state_dim || e.size() != plant.state_dim) {
    throw DomainError("eval_f: dimension mismatch for plant '" + plant.name + "'");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(e[i])) {
      throw DomainError("eval_f: non-finite argument");
    }
  }
  Vec out(plant.state_dim);
  plant.drift(x, e, out);
  for (double v : out) {
    if (!std::isfinite(v)) throw DomainError("eval_f: non-finite drift");
  }
  return out;
}

Vec eval_g(const PlantModel& plant, std::span<const double> x,
           std::span<const double> e) {
  Vec out = eval_f(plant, x, e);
  for (double& v : out) v = -v;
  return out;
}

namespace example {

double drift(double x, double e) {
  const double held = x + e;
  const double u = -held * std::cos(held * held);
  const double sx = std::sin(x * x);
  return -x * sx * sx + u * std::cos(x * x);
}

double effective_a3(double x, double e) {
  if (e == 0.0) return 0.0;
  return -(drift(x, e) + x) / e;
}

}  // namespace example

PlantModel example_scalar_plant() {
  PlantModel plant;
  plant.name = "example_scalar";
  plant.state_dim = 1;
  plant.drift = [](std::span<const double> x, std::span<const double> e,
                   std::span<double> out) { out[0] = example::drift(x[0], e[0]); };
  plant.x_set = Box::symmetric(1, example::kXRadius);
  plant.e_set = Box::symmetric(1, example::kERadius);
  return plant;
}

PlantModel plant_by_name(std::string_view name) {
  if (name == "example_scalar") return example_scalar_plant();
  throw ConfigError("unknown plant '" + std::string(name) + "'");
}

}  // namespace stc
