#pragma once

// A request pool together with the geometry servers move in: an abstract finite metric,
// the real line, or the plane. Requests are always pool points; server positions are
// Locations, which on the line and in the plane may lie between pool points.

#include "kserver/tspan.hpp"

#include <memory>
#include <variant>

namespace kserver {

enum class SpaceKind { Metric, Line, Plane };

using Location = std::variant<PointId, Rational, PlanePoint>;

class Space {
 public:
  static std::shared_ptr<const Space> from_metric(MetricPtr metric);
  static std::shared_ptr<const Space> line(std::vector<Rational> coordinates);
  /// L1 and LInf pools carry an exact pool metric; L2 pools do not.
  static std::shared_ptr<const Space> plane(std::vector<PlanePoint> points, Norm norm);

  SpaceKind kind() const noexcept { return kind_; }
  std::size_t pool_size() const noexcept { return size_; }

  /// Exact pool metric, or nullptr for Euclidean plane pools.
  const MetricPtr& metric() const noexcept { return metric_; }
  const std::vector<Rational>& line_coordinates() const noexcept { return line_; }
  const std::vector<PlanePoint>& plane_points() const noexcept { return plane_; }
  Norm norm() const noexcept { return norm_; }

  Location location(PointId p) const;
  Rational distance(const Location& u, const Location& v) const;
  Rational distance(PointId p, PointId q) const;
  bool same_place(const Location& u, const Location& v) const { return distance(u, v) == 0; }

 private:
  Space() = default;

  SpaceKind kind_ = SpaceKind::Metric;
  std::size_t size_ = 0;
  MetricPtr metric_;
  std::vector<Rational> line_;
  std::vector<PlanePoint> plane_;
  Norm norm_ = Norm::L2;
};

using SpacePtr = std::shared_ptr<const Space>;

std::string format_location(const Location& loc);

}  // namespace kserver
