#pragma once

// Isolation indices, split decomposition and the point calculus of the tight span T(X):
// functions f on X with f(x) + f(y) >= d(x,y) that are pointwise minimal, under the sup-norm.

#include "kserver/metric.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace kserver {

using MetricPtr = std::shared_ptr<const FiniteMetric>;

inline constexpr std::size_t kMaxSplitPoints = 16;
inline constexpr std::size_t kMaxVertexPoints = 6;

/// Bipartition {A, B} of 0..n-1 stored as the bitmask of A. A always holds point 0.
struct Split {
  std::uint32_t side_a = 0;
  std::size_t n = 0;

  std::uint32_t side_b() const { return ((n >= 32 ? 0u : (1u << n)) - 1u) & ~side_a; }
  bool separates(PointId x, PointId y) const {
    return (((side_a >> x) ^ (side_a >> y)) & 1u) != 0;
  }
  /// Orients an arbitrary proper nonempty subset so that point 0 is on side A.
  static Split canonical(std::uint32_t subset, std::size_t n);

  bool operator==(const Split&) const = default;
};

struct WeightedSplit {
  Split split;
  Rational alpha;
};

struct SplitDecomposition {
  std::vector<WeightedSplit> splits;  // alpha > 0 only, in bitmask order
  FiniteMetric residue;
  bool totally_decomposable = false;
};

/// Bandelt–Dress isolation index of A against B. Repeated pairs a = a', b = b' take part in the
/// minimum. Throws EmptySide or Overlap.
Rational isolation_index(const FiniteMetric& m, const std::vector<PointId>& side_a,
                         const std::vector<PointId>& side_b);

/// alpha_{{x},{y,z}} = (d(x,y) + d(x,z) - d(y,z)) / 2.
Rational isolation3(const FiniteMetric& m, PointId x, PointId y, PointId z);

SplitDecomposition split_decomposition(const FiniteMetric& m);

struct WeakCompatibilityResult {
  bool holds = true;
  std::array<PointId, 4> points{};      // witnessing quadruple when !holds
  std::array<std::size_t, 3> splits{};  // indices into the input list
};

WeakCompatibilityResult weak_compatibility(const std::vector<Split>& splits, std::size_t n);

/// Isolation indices of the seven splits of {x, y, z, r}:
/// a..d for the singletons x, y, z, r; e = xy|zr, f = xz|yr, g = xr|yz.
struct QuadCoordinates {
  Rational a, b, c, d, e, f, g;

  bool operator==(const QuadCoordinates&) const = default;
};

QuadCoordinates quad_coordinates(const FiniteMetric& m, PointId x, PointId y, PointId z, PointId r);

/// The six pairwise distances of x, y, z, r rebuilt from split coordinates.
FiniteMetric quad_metric(const QuadCoordinates& q);

// --- Tight span points -------------------------------------------------------

struct CoordinateVector {
  MetricPtr base;
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  const Rational& operator[](PointId x) const { return values[x]; }
  Rational& operator[](PointId x) { return values[x]; }

  bool operator==(const CoordinateVector& other) const { return values == other.values; }
};

struct VectorClass {
  bool in_p = false;
  bool lipschitz = false;
  bool minimal = false;
};

VectorClass classify_vector(const FiniteMetric& m, const CoordinateVector& f);

/// h_x(y) = d(x,y).
CoordinateVector canonical_row(const MetricPtr& m, PointId x);

/// Throws BaseMismatch unless the two vectors live over the same (or an identical) metric.
Rational supnorm_distance(const CoordinateVector& f, const CoordinateVector& g);

/// f*(x) = max_y (d(x,y) - f(y)). Equal to f exactly when f is minimal.
std::vector<Rational> conjugate(const FiniteMetric& m, const std::vector<Rational>& f);

/// Lowers each coordinate in index order to max(0, max_{y != x} d(x,y) - f(y)).
/// Maps any f in P to a minimal vector below it.
CoordinateVector lower_to_minimal(CoordinateVector f);

/// iota(f) over `extended`, whose first f.size() points are f's base metric.
/// Throws InconsistentRow if `extended` does not extend f's base by one or more points.
CoordinateVector extend_vector(const CoordinateVector& f, const MetricPtr& extended);

/// Convenience: appends a point with distances `row` to f's base and extends f onto it.
CoordinateVector extend_vector(const CoordinateVector& f, std::span<const Rational> row);

/// Point at distance delta from f on a geodesic to h_r. See the contract in the README.
/// Throws DeltaOutOfRange unless 0 <= delta <= f(r), ContractViolation if a postcondition fails.
CoordinateVector move_toward(const CoordinateVector& f, PointId r, const Rational& delta);

/// max(f - delta, h_r - (f(r) - delta), 0) pointwise.
CoordinateVector move_floor(const CoordinateVector& f, PointId r, const Rational& delta);

/// 0-cells of T(X), sorted lexicographically. Throws TooManyPoints for n > 6.
std::vector<CoordinateVector> tight_span_vertices(const MetricPtr& m);

}  // namespace kserver
