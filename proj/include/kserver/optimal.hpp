#pragma once

// Exact minimum-cost matchings between server configurations and the offline optimum.

#include "kserver/space.hpp"

#include <functional>

namespace kserver {

inline constexpr std::size_t kMaxMatchingSize = 8;

struct Matching {
  Rational cost;
  std::vector<std::size_t> assignment;  // A[i] is matched with B[assignment[i]]
};

/// Brute force over all permutations; the lexicographically smallest optimal assignment wins.
Matching min_matching(std::size_t k, const std::function<Rational(std::size_t, std::size_t)>& cost);

/// Throws SizeMismatch when |A| != |B|.
Matching min_matching(const FiniteMetric& m, const std::vector<PointId>& a, const std::vector<PointId>& b);
Matching min_matching(const Space& space, const std::vector<Location>& a, const std::vector<Location>& b);
Matching min_matching(const std::vector<CoordinateVector>& a, const std::vector<CoordinateVector>& b);

using Configuration = std::vector<PointId>;  // sorted multiset of pool points

struct OptResult {
  Rational total;
  std::vector<Configuration> path;  // configuration after each request
};

/// Offline optimum over configurations of pool points. Throws RequestOutsideMetric.
OptResult opt_cost(const Space& space, Configuration initial, const std::vector<PointId>& requests);
OptResult opt_cost(const FiniteMetric& m, Configuration initial, const std::vector<PointId>& requests);

}  // namespace kserver
