#pragma once

#include "skewlab/rng.hpp"
#include "skewlab/system.hpp"

#include <cmath>
#include <vector>

namespace skewlab::test {

inline TorusPoint2 random_point2(const CounterRng& rng, std::uint64_t k) {
  return TorusPoint2::reduced(rng.uniform(2 * k), rng.uniform(2 * k + 1));
}

inline TorusPoint4 random_point4(const CounterRng& rng, std::uint64_t k) {
  return {random_point2(rng, 2 * k), random_point2(rng, 2 * k + 1)};
}

inline RotationChain sample_chain(double theta) {
  return RotationChain({LocalizedRotation(TorusPoint2(0.3, 0.4), 0.12, theta),
                        LocalizedRotation(TorusPoint2(0.7, 0.75), 0.1, -0.8 * theta)});
}

/// Product example with one large gated perturbation (support covers a
/// sizeable fraction of the base and fiber).
inline SkewProductSystem perturbed_system(double theta, double gate_radius = 0.15) {
  return example_system().with_perturbation(
      FiberPerturbation{BaseGate{TorusPoint2(0.42, 0.37), gate_radius}, sample_chain(theta)});
}

/// Small gate: most orbits rarely meet it, convergence stays close to the product rate.
inline SkewProductSystem near_product_system(double theta) {
  return example_system().with_perturbation(
      FiberPerturbation{BaseGate{TorusPoint2(0.42, 0.37), 0.03}, sample_chain(theta)});
}

inline double golden() { return (3.0 + std::sqrt(5.0)) / 2.0; }

}  // namespace skewlab::test
