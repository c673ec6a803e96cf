#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "weylcalc/manifold.hpp"
#include "weylcalc/mapping.hpp"

namespace weyl {

/// Deterministic counter-based generator (splitmix64). Unlike a shared
/// stream, every (seed, index) pair yields an independent value, so parallel
/// consumers see identical numbers regardless of evaluation order.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [lo, hi) from one splitmix64 draw.
double uniform_from(std::uint64_t seed, std::uint64_t index, double lo,
                    double hi);

/// A generated manifold plus a mapping that keeps the underlined deformation
/// tensor symmetric (the concircular hypothesis), so every transformation law
/// in the suite is exercisable on it.
struct FuzzedManifold {
  WeylManifold manifold;
  ConformalMapping mapping;
};

/// Build a random Weyl manifold of dimension n from a seed:
///   - diagonal metric g_ii = a + b x_i^2 with a in [0.6, 1.6], b in [0, 0.8]
///     (positive definite on the sampling box [-0.5, 0.5]^n),
///   - polynomial Weyl form T,
///   - gradient connection form S = d(potential) so S is closed,
///   - mapping P = c S (closed S makes this admissible), Q = P.
FuzzedManifold fuzz_manifold(int n, std::uint64_t seed);

/// Sample `count` points in the box, deterministically per point index.
std::vector<Point> sample_points(int n,
                                 const std::vector<std::pair<double, double>>& box,
                                 int count, std::uint64_t seed);

}  // namespace weyl
