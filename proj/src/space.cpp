#include "kserver/space.hpp"

#include "kserver/error.hpp"

#include <cmath>
#include <sstream>

namespace kserver {

namespace {

Rational exact_plane_distance(const PlanePoint& p, const PlanePoint& q, Norm norm) {
  if (norm == Norm::L2) return rational_from_double(lp_distance(p, q, norm));
  const Rational dx = abs(rational_from_double(p.x) - rational_from_double(q.x));
  const Rational dy = abs(rational_from_double(p.y) - rational_from_double(q.y));
  if (norm == Norm::L1) return dx + dy;
  return dx > dy ? dx : dy;
}

}  // namespace

std::shared_ptr<const Space> Space::from_metric(MetricPtr metric) {
  std::shared_ptr<Space> s(new Space);
  s->kind_ = SpaceKind::Metric;
  s->size_ = metric->size();
  s->metric_ = std::move(metric);
  return s;
}

std::shared_ptr<const Space> Space::line(std::vector<Rational> coordinates) {
  const std::size_t n = coordinates.size();
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = abs(coordinates[i] - coordinates[j]);
  }
  std::shared_ptr<Space> s(new Space);
  s->kind_ = SpaceKind::Line;
  s->size_ = n;
  s->metric_ = std::make_shared<const FiniteMetric>(validate_metric(std::move(dist)));
  s->line_ = std::move(coordinates);
  return s;
}

std::shared_ptr<const Space> Space::plane(std::vector<PlanePoint> points, Norm norm) {
  for (const auto& p : points) make_plane_point(p.x, p.y);
  std::shared_ptr<Space> s(new Space);
  s->kind_ = SpaceKind::Plane;
  s->size_ = points.size();
  s->norm_ = norm;
  if (norm != Norm::L2) {
    const std::size_t n = points.size();
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dist[i][j] = exact_plane_distance(points[i], points[j], norm);
    }
    s->metric_ = std::make_shared<const FiniteMetric>(validate_metric(std::move(dist)));
  }
  s->plane_ = std::move(points);
  return s;
}

Location Space::location(PointId p) const {
  if (p >= size_) throw Error(ErrorCode::RequestOutsideMetric, "point " + std::to_string(p) + " is not in the pool");
  switch (kind_) {
    case SpaceKind::Metric: return p;
    case SpaceKind::Line: return line_[p];
    case SpaceKind::Plane: return plane_[p];
  }
  return p;
}

Rational Space::distance(const Location& u, const Location& v) const {
  switch (kind_) {
    case SpaceKind::Metric:
      return (*metric_)(std::get<PointId>(u), std::get<PointId>(v));
    case SpaceKind::Line:
      return abs(std::get<Rational>(u) - std::get<Rational>(v));
    case SpaceKind::Plane:
      return exact_plane_distance(std::get<PlanePoint>(u), std::get<PlanePoint>(v), norm_);
  }
  return 0;
}

Rational Space::distance(PointId p, PointId q) const {
  if (metric_) return (*metric_)(p, q);
  return distance(location(p), location(q));
}

std::string format_location(const Location& loc) {
  if (auto p = std::get_if<PointId>(&loc)) return std::to_string(*p);
  if (auto r = std::get_if<Rational>(&loc)) return format_rational(*r);
  const auto& pp = std::get<PlanePoint>(loc);
  std::ostringstream out;
  out.precision(17);
  out << "(" << pp.x << ", " << pp.y << ")";
  return out.str();
}

}  // namespace kserver
