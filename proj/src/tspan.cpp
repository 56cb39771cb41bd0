#include "kserver/tspan.hpp"

#include "kserver/error.hpp"

#include <algorithm>
#include <bit>

namespace kserver {

namespace {

std::vector<PointId> members(std::uint32_t mask, std::size_t n) {
  std::vector<PointId> out;
  for (PointId x = 0; x < n; ++x) {
    if ((mask >> x) & 1u) out.push_back(x);
  }
  return out;
}

void require_same_base(const CoordinateVector& f, const CoordinateVector& g) {
  if (f.size() != g.size()) throw Error(ErrorCode::BaseMismatch, "vectors have different lengths");
  if (f.base == g.base) return;
  if (!f.base || !g.base || !(*f.base == *g.base)) {
    throw Error(ErrorCode::BaseMismatch, "vectors live over different metrics");
  }
}

std::string describe(const CoordinateVector& f) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ", ";
    out += format_rational(f[i]);
  }
  return out + ")";
}

}  // namespace

Split Split::canonical(std::uint32_t subset, std::size_t n) {
  const std::uint32_t all = (n >= 32 ? 0u : (1u << n)) - 1u;
  subset &= all;
  if (subset == 0 || subset == all) throw Error(ErrorCode::EmptySide, "split side is empty");
  if ((subset & 1u) == 0) subset = all & ~subset;
  return {subset, n};
}

Rational isolation_index(const FiniteMetric& m, const std::vector<PointId>& side_a,
                         const std::vector<PointId>& side_b) {
  if (side_a.empty() || side_b.empty()) throw Error(ErrorCode::EmptySide, "isolation index needs nonempty sides");
  for (auto a : side_a) {
    if (a >= m.size()) throw Error(ErrorCode::InvalidArgument, "point index out of range");
    for (auto b : side_b) {
      if (b >= m.size()) throw Error(ErrorCode::InvalidArgument, "point index out of range");
      if (a == b) throw Error(ErrorCode::Overlap, "split sides overlap", {a});
    }
  }
  std::optional<Rational> best;
  for (auto a : side_a) {
    for (auto a2 : side_a) {
      for (auto b : side_b) {
        for (auto b2 : side_b) {
          const Rational inner = m(a, a2) + m(b, b2);
          Rational v = m(a, b) + m(a2, b2) - inner;
          const Rational w = m(a, b2) + m(a2, b) - inner;
          if (w > v) v = w;
          if (v < 0) v = 0;
          if (!best || v < *best) best = v;
          if (*best == 0) return 0;
        }
      }
    }
  }
  return *best / 2;
}

Rational isolation3(const FiniteMetric& m, PointId x, PointId y, PointId z) {
  return (m(x, y) + m(x, z) - m(y, z)) / 2;
}

SplitDecomposition split_decomposition(const FiniteMetric& m) {
  const std::size_t n = m.size();
  if (n > kMaxSplitPoints) {
    throw Error(ErrorCode::TooManyPoints,
                std::to_string(n) + " points exceed the split limit of " + std::to_string(kMaxSplitPoints));
  }
  SplitDecomposition out;
  std::vector<std::vector<Rational>> residue(n, std::vector<Rational>(n));
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) residue[x][y] = m(x, y);
  }
  if (n >= 2) {
    const std::uint32_t all = (1u << n) - 1u;
    // Masks containing point 0, excluding the full set.
    for (std::uint32_t half_mask = 0; half_mask < (1u << (n - 1)) - 1u; ++half_mask) {
      const std::uint32_t a_mask = (half_mask << 1) | 1u;
      if (a_mask == all) continue;
      Split s{a_mask, n};
      Rational alpha = isolation_index(m, members(a_mask, n), members(s.side_b(), n));
      if (alpha == 0) continue;
      for (PointId x = 0; x < n; ++x) {
        for (PointId y = 0; y < n; ++y) {
          if (s.separates(x, y)) residue[x][y] -= alpha;
        }
      }
      out.splits.push_back({s, std::move(alpha)});
    }
  }
  out.totally_decomposable = true;
  for (const auto& row : residue) {
    for (const auto& v : row) {
      if (v != 0) out.totally_decomposable = false;
    }
  }
  try {
    out.residue = validate_metric(std::move(residue), m.labels());
  } catch (const Error& e) {
    throw Error(ErrorCode::Internal, std::string("split-prime residue is not a pseudo-metric: ") + e.what(),
                e.witness());
  }
  return out;
}

WeakCompatibilityResult weak_compatibility(const std::vector<Split>& splits, std::size_t n) {
  for (PointId p = 0; p < n; ++p) {
    for (PointId q = p + 1; q < n; ++q) {
      for (PointId s = q + 1; s < n; ++s) {
        for (PointId t = s + 1; t < n; ++t) {
          // Induced 2|2 splits: pq|st, ps|qt, pt|qs.
          std::array<std::optional<std::size_t>, 3> seen;
          for (std::size_t i = 0; i < splits.size(); ++i) {
            const Split& sp = splits[i];
            const bool pq = !sp.separates(p, q);
            const bool ps = !sp.separates(p, s);
            const bool pt = !sp.separates(p, t);
            int which = -1;
            if (pq && !ps && !pt && !sp.separates(s, t)) which = 0;
            else if (ps && !pq && !pt && !sp.separates(q, t)) which = 1;
            else if (pt && !pq && !ps && !sp.separates(q, s)) which = 2;
            if (which >= 0 && !seen[which]) seen[which] = i;
          }
          if (seen[0] && seen[1] && seen[2]) {
            return {false, {p, q, s, t}, {*seen[0], *seen[1], *seen[2]}};
          }
        }
      }
    }
  }
  return {};
}

QuadCoordinates quad_coordinates(const FiniteMetric& m, PointId x, PointId y, PointId z, PointId r) {
  const std::array<PointId, 4> pts{x, y, z, r};
  const FiniteMetric q = m.restrict(pts);
  auto iso = [&](std::vector<PointId> a, std::vector<PointId> b) { return isolation_index(q, a, b); };
  QuadCoordinates c{
      iso({0}, {1, 2, 3}), iso({1}, {0, 2, 3}), iso({2}, {0, 1, 3}), iso({3}, {0, 1, 2}),
      iso({0, 1}, {2, 3}), iso({0, 2}, {1, 3}), iso({0, 3}, {1, 2}),
  };
  const FiniteMetric rebuilt = quad_metric(c);
  if (!(rebuilt == q)) {
    throw Error(ErrorCode::ReconstructionFailure, "split coordinates do not reconstruct the quadruple");
  }
  if (c.e * c.f * c.g != 0) {
    throw Error(ErrorCode::ReconstructionFailure, "efg != 0 for a four-point metric");
  }
  return c;
}

FiniteMetric quad_metric(const QuadCoordinates& q) {
  const Rational dxy = q.a + q.b + q.f + q.g;
  const Rational dxz = q.a + q.c + q.e + q.g;
  const Rational dyz = q.b + q.c + q.e + q.f;
  const Rational dxr = q.a + q.d + q.e + q.f;
  const Rational dyr = q.b + q.d + q.e + q.g;
  const Rational dzr = q.c + q.d + q.f + q.g;
  return validate_metric({
      {0, dxy, dxz, dxr},
      {dxy, 0, dyz, dyr},
      {dxz, dyz, 0, dzr},
      {dxr, dyr, dzr, 0},
  });
}

VectorClass classify_vector(const FiniteMetric& m, const CoordinateVector& f) {
  const std::size_t n = m.size();
  if (f.size() != n) throw Error(ErrorCode::BaseMismatch, "vector length differs from metric size");
  VectorClass c{true, true, false};
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x; y < n; ++y) {
      if (f[x] + f[y] < m(x, y)) c.in_p = false;
      if (abs(f[x] - f[y]) > m(x, y)) c.lipschitz = false;
    }
  }
  c.minimal = c.in_p && conjugate(m, f.values) == f.values;
  return c;
}

CoordinateVector canonical_row(const MetricPtr& m, PointId x) {
  if (x >= m->size()) throw Error(ErrorCode::InvalidArgument, "point index out of range");
  auto row = m->row(x);
  return {m, std::vector<Rational>(row.begin(), row.end())};
}

Rational supnorm_distance(const CoordinateVector& f, const CoordinateVector& g) {
  require_same_base(f, g);
  Rational best = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Rational v = abs(f[i] - g[i]);
    if (v > best) best = std::move(v);
  }
  return best;
}

std::vector<Rational> conjugate(const FiniteMetric& m, const std::vector<Rational>& f) {
  const std::size_t n = m.size();
  std::vector<Rational> out(n);
  for (PointId x = 0; x < n; ++x) {
    Rational best = m(x, 0) - f[0];
    for (PointId y = 1; y < n; ++y) {
      Rational v = m(x, y) - f[y];
      if (v > best) best = std::move(v);
    }
    out[x] = std::move(best);
  }
  return out;
}

CoordinateVector lower_to_minimal(CoordinateVector f) {
  const FiniteMetric& m = *f.base;
  for (PointId w = 0; w < f.size(); ++w) {
    Rational best = 0;
    for (PointId y = 0; y < f.size(); ++y) {
      if (y == w) continue;
      Rational v = m(w, y) - f[y];
      if (v > best) best = std::move(v);
    }
    if (best < f[w]) f[w] = std::move(best);
  }
  return f;
}

CoordinateVector extend_vector(const CoordinateVector& f, const MetricPtr& extended) {
  const FiniteMetric& old = *f.base;
  const std::size_t n = old.size();
  if (extended->size() < n) throw Error(ErrorCode::InconsistentRow, "extended metric is smaller than the base");
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if ((*extended)(x, y) != old(x, y)) {
        throw Error(ErrorCode::InconsistentRow, "extended metric disagrees with the base", {x, y});
      }
    }
  }
  CoordinateVector out{extended, f.values};
  out.values.reserve(extended->size());
  for (PointId p = n; p < extended->size(); ++p) {
    Rational best = (*extended)(p, 0) - f[0];
    for (PointId y = 1; y < n; ++y) {
      Rational v = (*extended)(p, y) - f[y];
      if (v > best) best = std::move(v);
    }
    if (n == 0) best = 0;
    out.values.push_back(std::move(best));
  }
  return out;
}

CoordinateVector extend_vector(const CoordinateVector& f, std::span<const Rational> row) {
  try {
    auto extended = std::make_shared<const FiniteMetric>(add_point(*f.base, row));
    return extend_vector(f, extended);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InconsistentRow) throw;
    throw Error(ErrorCode::InconsistentRow, e.what(), e.witness());
  }
}

CoordinateVector move_floor(const CoordinateVector& f, PointId r, const Rational& delta) {
  const FiniteMetric& m = *f.base;
  const Rational rest = f[r] - delta;
  CoordinateVector out{f.base, std::vector<Rational>(f.size())};
  for (PointId w = 0; w < f.size(); ++w) {
    Rational v = f[w] - delta;
    Rational u = m(r, w) - rest;
    if (u > v) v = std::move(u);
    if (v < 0) v = 0;
    out[w] = std::move(v);
  }
  return out;
}

CoordinateVector move_toward(const CoordinateVector& f, PointId r, const Rational& delta) {
  const FiniteMetric& m = *f.base;
  if (r >= f.size()) throw Error(ErrorCode::InvalidArgument, "target point out of range");
  const Rational& total = f[r];
  if (delta < 0 || delta > total) {
    throw Error(ErrorCode::DeltaOutOfRange,
                "delta " + format_rational(delta) + " outside [0, " + format_rational(total) + "]");
  }
  if (delta == 0) return f;
  const CoordinateVector target = canonical_row(f.base, r);
  if (delta == total) return target;

  const CoordinateVector floor = move_floor(f, r, delta);
  const std::vector<Rational> upper = conjugate(m, floor.values);
  CoordinateVector g{f.base, std::vector<Rational>(f.size())};
  for (PointId w = 0; w < f.size(); ++w) g[w] = (floor[w] + upper[w]) / 2;
  g = lower_to_minimal(std::move(g));

  const Rational rest = total - delta;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::ContractViolation,
                what + ": f=" + describe(f) + " r=" + std::to_string(r) + " delta=" + format_rational(delta) +
                    " g=" + describe(g),
                {r});
  };
  const VectorClass cls = classify_vector(m, g);
  if (!cls.in_p) fail("result is not in P");
  if (!cls.minimal) fail("result is not minimal");
  if (supnorm_distance(f, g) != delta) fail("distance to start differs from delta");
  if (supnorm_distance(g, target) != rest) fail("distance to target differs from D - delta");
  for (PointId w = 0; w < f.size(); ++w) {
    if (g[w] < floor[w]) fail("result is below the floor");
    if (g[w] > f[w] + delta || g[w] > target[w] + rest) fail("result is above the cap");
  }
  return g;
}

std::vector<CoordinateVector> tight_span_vertices(const MetricPtr& mp) {
  const FiniteMetric& m = *mp;
  const std::size_t n = m.size();
  if (n > kMaxVertexPoints) {
    throw Error(ErrorCode::TooManyPoints,
                std::to_string(n) + " points exceed the vertex enumeration limit of " +
                    std::to_string(kMaxVertexPoints));
  }
  std::vector<std::pair<PointId, PointId>> planes;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x; y < n; ++y) planes.emplace_back(x, y);
  }
  std::vector<std::vector<Rational>> found;
  std::vector<std::size_t> pick(n);
  // Walk all n-subsets of the hyperplanes in lexicographic order.
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  while (n > 0) {
    // Solve f(x) + f(y) = d(x,y) for the chosen planes by Gauss–Jordan elimination.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (std::size_t row = 0; row < n; ++row) {
      auto [x, y] = planes[pick[row]];
      a[row][x] += 1;
      a[row][y] += 1;
      a[row][n] = m(x, y);
    }
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      while (piv < n && a[piv][col] == 0) ++piv;
      if (piv == n) {
        singular = true;
        break;
      }
      std::swap(a[piv], a[col]);
      const Rational inv = 1 / a[col][col];
      for (auto& v : a[col]) v *= inv;
      for (std::size_t row = 0; row < n; ++row) {
        if (row == col || a[row][col] == 0) continue;
        const Rational factor = a[row][col];
        for (std::size_t k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
      }
    }
    if (!singular) {
      CoordinateVector f{mp, std::vector<Rational>(n)};
      for (std::size_t i = 0; i < n; ++i) f[i] = a[i][n];
      if (classify_vector(m, f).minimal) found.push_back(std::move(f.values));
    }
    // Next combination.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == planes.size() - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<CoordinateVector> out;
  out.reserve(found.size());
  for (auto& v : found) out.push_back({mp, std::move(v)});
  return out;
}

}  // namespace kserver
