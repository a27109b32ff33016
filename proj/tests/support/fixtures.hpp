#pragma once

#include <cstdint>
#include <vector>

#include "dmp/bodies.hpp"
#include "dmp/measures.hpp"

namespace dmp::testing {

/// [-1, 1]^n.
SymmetricPolytope cube(int n = 3);

/// Seeded polytope with Gaussian normals, between n+1 and max_pairs pairs,
/// support numbers uniform in [0.6, 1.4].
SymmetricPolytope random_polytope(std::uint64_t seed, int n = 3, int max_pairs = 12);

/// Seeded values uniform in [-1, 1].
Vec random_vector(std::uint64_t seed, int size);

/// Seeded Haar-random orthogonal n x n matrix.
Mat random_rotation(std::uint64_t seed, int n);

/// Nearly uniform directions on S^2 (spiral points on the upper half).
std::vector<UnitVector> spiral_directions(int count);

/// Equal weights w at +-e_i.
DiscreteEvenMeasure axis_measure(int n, double w = 1.0);

/// Relative difference |a - b| / max(|a|, |b|), 0 when both vanish.
double rel_diff(double a, double b);

} // namespace dmp::testing
