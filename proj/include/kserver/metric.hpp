#pragma once

// Finite (pseudo-)metric spaces with exact rational distances, plane points for
// the Euclidean algorithm, and growth of the request universe one point at a time.

#include "kserver/rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kserver {

using PointId = std::size_t;

/// Validated finite pseudo-metric. Immutable once constructed.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  std::size_t size() const noexcept { return n_; }
  const Rational& operator()(PointId x, PointId y) const { return dist_[x * n_ + y]; }
  std::span<const Rational> row(PointId x) const { return {dist_.data() + x * n_, n_}; }

  /// Display labels; empty when the metric carries none.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(PointId x) const;

  /// True iff every off-diagonal distance is positive.
  bool is_proper() const;

  /// Submetric on `points` (repeats allowed; a repeated point becomes a duplicate).
  FiniteMetric restrict(std::span<const PointId> points) const;

  bool operator==(const FiniteMetric& other) const;

 private:
  friend FiniteMetric validate_metric(std::vector<std::vector<Rational>>, std::vector<std::string>);
  friend FiniteMetric add_point(const FiniteMetric&, std::span<const Rational>, std::string);

  std::size_t n_ = 0;
  std::vector<Rational> dist_;
  std::vector<std::string> labels_;
};

/// Checks the metric axioms on a square matrix. Throws Error with code NotSquare,
/// NonzeroDiagonal, NegativeEntry, Asymmetric or TriangleViolation; the witness names
/// the offending points. A triangle witness (x, z, y) means d(x,z) > d(x,y) + d(y,z).
FiniteMetric validate_metric(std::vector<std::vector<Rational>> matrix,
                             std::vector<std::string> labels = {});

/// Appends a point with distances `row` to the existing points. Only the triangles
/// involving the new point are re-checked.
FiniteMetric add_point(const FiniteMetric& metric, std::span<const Rational> row,
                       std::string label = {});

/// Quadruple that violates the four point condition, reported as (u, v, x, y) with
/// d(u,v) + d(x,y) > max(d(u,x) + d(v,y), d(u,y) + d(v,x)).
struct FourPointResult {
  bool holds = true;
  std::optional<std::array<PointId, 4>> witness;
};

FourPointResult four_point_condition(const FiniteMetric& metric);

// --- Plane -----------------------------------------------------------------

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PlanePoint&) const = default;
};

/// Throws InvalidArgument on NaN or infinite coordinates.
PlanePoint make_plane_point(double x, double y);

enum class Norm { L1, L2, LInf };

double lp_distance(const PlanePoint& p, const PlanePoint& q, Norm norm);

const char* norm_name(Norm norm);

}  // namespace kserver
