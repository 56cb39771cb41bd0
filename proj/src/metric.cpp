#include "kserver/metric.hpp"

#include "kserver/error.hpp"

#include <algorithm>
#include <cmath>

namespace kserver {

namespace {

void check_triangles_with(const std::vector<Rational>& dist, std::size_t n, PointId p) {
  // Every triangle that mentions p, in all three roles.
  auto d = [&](PointId a, PointId b) -> const Rational& { return dist[a * n + b]; };
  for (PointId a = 0; a < n; ++a) {
    for (PointId b = 0; b < n; ++b) {
      if (d(p, b) > d(p, a) + d(a, b)) {
        throw Error(ErrorCode::TriangleViolation, "triangle inequality fails",
                    {p, b, a});
      }
      if (d(a, b) > d(a, p) + d(p, b)) {
        throw Error(ErrorCode::TriangleViolation, "triangle inequality fails",
                    {a, b, p});
      }
    }
  }
}

}  // namespace

std::string FiniteMetric::label(PointId x) const {
  if (x < labels_.size() && !labels_[x].empty()) return labels_[x];
  return std::to_string(x);
}

bool FiniteMetric::is_proper() const {
  for (PointId x = 0; x < n_; ++x) {
    for (PointId y = x + 1; y < n_; ++y) {
      if ((*this)(x, y) == 0) return false;
    }
  }
  return true;
}

FiniteMetric FiniteMetric::restrict(std::span<const PointId> points) const {
  FiniteMetric out;
  out.n_ = points.size();
  out.dist_.resize(out.n_ * out.n_);
  for (std::size_t i = 0; i < out.n_; ++i) {
    if (points[i] >= n_) throw Error(ErrorCode::InvalidArgument, "point index out of range");
    for (std::size_t j = 0; j < out.n_; ++j) {
      out.dist_[i * out.n_ + j] = (*this)(points[i], points[j]);
    }
  }
  if (!labels_.empty()) {
    for (auto p : points) out.labels_.push_back(labels_[p]);
  }
  return out;
}

bool FiniteMetric::operator==(const FiniteMetric& other) const {
  return n_ == other.n_ && dist_ == other.dist_;
}

FiniteMetric validate_metric(std::vector<std::vector<Rational>> matrix,
                             std::vector<std::string> labels) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
  }
  if (!labels.empty()) {
    if (labels.size() != n) throw Error(ErrorCode::InvalidArgument, "label count does not match matrix size");
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::InvalidArgument, "duplicate labels");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0) throw Error(ErrorCode::NonzeroDiagonal, "d(x,x) != 0", {i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i][j] < 0) throw Error(ErrorCode::NegativeEntry, "negative distance", {i, j});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix[i][j] != matrix[j][i]) throw Error(ErrorCode::Asymmetric, "d(x,y) != d(y,x)", {i, j});
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = x + 1; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        if (matrix[x][z] > matrix[x][y] + matrix[y][z]) {
          throw Error(ErrorCode::TriangleViolation, "triangle inequality fails", {x, z, y});
        }
      }
    }
  }

  FiniteMetric out;
  out.n_ = n;
  out.dist_.reserve(n * n);
  for (auto& row : matrix) {
    for (auto& v : row) out.dist_.push_back(std::move(v));
  }
  out.labels_ = std::move(labels);
  return out;
}

FiniteMetric add_point(const FiniteMetric& metric, std::span<const Rational> row, std::string label) {
  const std::size_t n = metric.size();
  if (row.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] < 0) throw Error(ErrorCode::NegativeEntry, "negative distance", {n, i});
  }
  const std::size_t m = n + 1;
  std::vector<Rational> dist(m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * m + j] = metric(i, j);
    dist[i * m + n] = row[i];
    dist[n * m + i] = row[i];
  }
  check_triangles_with(dist, m, n);

  FiniteMetric out;
  out.n_ = m;
  out.dist_ = std::move(dist);
  if (!metric.labels_.empty() || !label.empty()) {
    out.labels_ = metric.labels_;
    out.labels_.resize(n);
    out.labels_.push_back(std::move(label));
  }
  return out;
}

FourPointResult four_point_condition(const FiniteMetric& m) {
  const std::size_t n = m.size();
  for (PointId p = 0; p < n; ++p) {
    for (PointId q = p + 1; q < n; ++q) {
      for (PointId s = q + 1; s < n; ++s) {
        for (PointId t = s + 1; t < n; ++t) {
          // The three pairings of {p,q,s,t}; the largest sum must be attained twice.
          const std::array<std::array<PointId, 4>, 3> pairings{{
              {p, q, s, t},
              {p, s, q, t},
              {p, t, q, s},
          }};
          std::array<Rational, 3> sums;
          for (std::size_t i = 0; i < 3; ++i) {
            const auto& w = pairings[i];
            sums[i] = m(w[0], w[1]) + m(w[2], w[3]);
          }
          for (std::size_t i = 0; i < 3; ++i) {
            const auto& a = sums[(i + 1) % 3];
            const auto& b = sums[(i + 2) % 3];
            if (sums[i] > a && sums[i] > b) {
              return {false, pairings[i]};
            }
          }
        }
      }
    }
  }
  return {true, std::nullopt};
}

PlanePoint make_plane_point(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::InvalidArgument, "plane coordinates must be finite");
  }
  return {x, y};
}

double lp_distance(const PlanePoint& p, const PlanePoint& q, Norm norm) {
  const double dx = std::abs(p.x - q.x);
  const double dy = std::abs(p.y - q.y);
  switch (norm) {
    case Norm::L1: return dx + dy;
    case Norm::L2: return std::hypot(dx, dy);
    case Norm::LInf: return std::max(dx, dy);
  }
  return 0.0;
}

const char* norm_name(Norm norm) {
  switch (norm) {
    case Norm::L1: return "L1";
    case Norm::L2: return "L2";
    case Norm::LInf: return "LInf";
  }
  return "?";
}

}  // namespace kserver
