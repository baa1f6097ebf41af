#pragma once

#include "stc/paramgen.hpp"
#include "stc/sim.hpp"

namespace stc::test {

/// The default family, synthesised once per process.
inline const TriggerConfig& family() {
  static const TriggerConfig cfg = build_family(default_eps_grid(), FamilyOptions{});
  return cfg;
}

inline const StorageBundle& bundle() {
  static const StorageBundle b = make_quadratic_bundle(example::kVCoeff, 0.2);
  return b;
}

inline const PlantModel& plant() {
  static const PlantModel p = example_scalar_plant();
  return p;
}

/// A state comfortably inside the region of attraction of family().
inline constexpr double kInside = 0.15;

}  // namespace stc::test
