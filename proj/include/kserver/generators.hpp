#pragma once

// Seeded random instances: metrics, tree metrics, request pools, tight span points and
// split coordinates of quadruples.

#include "kserver/simulation.hpp"

#include <string>

namespace kserver {

/// p/q with p in [0, max_num] and q in [1, max_den].
Rational random_rational(Rng& rng, int max_num = 20, int max_den = 4);

/// Shortest-path closure of random nonnegative edge weights (occasionally zero, so pseudo-metrics occur).
FiniteMetric random_metric(std::size_t n, Rng& rng, bool allow_zero = true);

/// Path metric of a random weighted tree on n nodes (every node is a point).
FiniteMetric random_tree_metric(std::size_t n, Rng& rng);

/// Split coordinates a..g >= 0 with one of e, f, g forced to zero; coordinates are zero
/// with probability 1/5 to exercise degenerate quadruples.
QuadCoordinates random_quad_coordinates(Rng& rng);

/// A random minimal vector over m: h_x plus random slack, then lowered.
CoordinateVector random_minimal_vector(const MetricPtr& m, Rng& rng);

/// Pool specs: line:N, tree:N, random:N (abstract metrics), grid:N (N x N grid, L1) and
/// plane:N (Euclidean). Throws InvalidArgument on a malformed spec.
SpacePtr make_pool(const std::string& spec, std::uint64_t seed);

}  // namespace kserver
