#include "helpers.hpp"

#include <algorithm>
#include <set>

using namespace kserver;
using namespace testutil;

namespace {

std::vector<PointId> all_points(std::size_t n) {
  std::vector<PointId> v(n);
  for (PointId i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Vertex oracle: every vertex of T is cut out by a functional tight graph whose components
// each close an odd cycle (loops count), so trying every map x -> partner(x) finds them all.
std::set<std::vector<Rational>> brute_vertices(const FiniteMetric& m) {
  const std::size_t n = m.size();
  std::set<std::vector<Rational>> out;
  std::vector<std::size_t> partner(n, 0);
  for (;;) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (PointId x = 0; x < n; ++x) {
      a[x][x] += 1;
      a[x][partner[x]] += 1;
      a[x][n] = m(x, partner[x]);
    }
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      std::size_t p = c;
      while (p < n && a[p][c] == 0) ++p;
      if (p == n) {
        ok = false;
        break;
      }
      std::swap(a[p], a[c]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0) continue;
        const Rational factor = a[r][c] / a[c][c];
        for (std::size_t k = 0; k <= n; ++k) a[r][k] -= factor * a[c][k];
      }
    }
    if (ok) {
      std::vector<Rational> f(n);
      for (std::size_t i = 0; i < n; ++i) f[i] = a[i][n] / a[i][i];
      bool in_p = true;
      for (PointId x = 0; x < n && in_p; ++x)
        for (PointId y = 0; y < n; ++y)
          if (f[x] + f[y] < m(x, y)) in_p = false;
      if (in_p) out.insert(f);
    }
    std::size_t i = 0;
    while (i < n && ++partner[i] == n) partner[i++] = 0;
    if (i == n) break;
  }
  return out;
}

bool contract_holds(const CoordinateVector& f, PointId r, const Rational& delta, const CoordinateVector& g) {
  const auto hr = canonical_row(f.base, r);
  const Rational D = supnorm_distance(f, hr);
  const auto c = classify_vector(*f.base, g);
  return c.in_p && c.minimal && supnorm_distance(f, g) == delta && supnorm_distance(g, hr) == D - delta;
}

}  // namespace

TEST_CASE("isolation index examples") {
  auto m = t345();
  CHECK(isolation_index(m, {0}, {1, 2}) == 1);
  CHECK(isolation_index(m, {2}, {0, 1}) == 3);
  CHECK(isolation_index(cycle4(), {0, 1}, {2, 3}) == 1);
  CHECK(isolation3(m, 0, 1, 2) == 1);
  CHECK(error_of([&] { isolation_index(m, {}, {0}); }) == ErrorCode::EmptySide);
  CHECK(error_of([&] { isolation_index(m, {0, 1}, {1}); }) == ErrorCode::Overlap);
}

TEST_CASE("isolation indices are nonnegative") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 6);
    auto m = random_metric(n, rng);
    const std::uint32_t mask = 1 + uniform_below(rng, (1u << n) - 2);
    std::vector<PointId> a, b;
    for (PointId p = 0; p < n; ++p) ((mask >> p) & 1 ? a : b).push_back(p);
    CHECK(isolation_index(m, a, b) >= 0);
  }
}

TEST_CASE("split decomposition of the 3-4-5 triangle") {
  auto d = split_decomposition(t345());
  REQUIRE(d.splits.size() == 3);
  std::vector<Rational> alphas;
  for (const auto& s : d.splits) {
    CHECK(std::min(std::popcount(s.split.side_a), std::popcount(s.split.side_b())) == 1);
    alphas.push_back(s.alpha);
  }
  std::sort(alphas.begin(), alphas.end());
  CHECK(alphas == rats({1, 2, 3}));
  CHECK(d.totally_decomposable);
}

TEST_CASE("unit K4 decomposes into four half-weight singleton splits") {
  auto d = split_decomposition(metric({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}));
  REQUIRE(d.splits.size() == 4);
  for (const auto& s : d.splits) CHECK(s.alpha == R("1/2"));
  CHECK(d.totally_decomposable);
}

TEST_CASE("K33 has a nonzero split-prime residue") {
  auto m = metric({{0, 2, 2, 1, 1, 1},
                   {2, 0, 2, 1, 1, 1},
                   {2, 2, 0, 1, 1, 1},
                   {1, 1, 1, 0, 2, 2},
                   {1, 1, 1, 2, 0, 2},
                   {1, 1, 1, 2, 2, 0}});
  auto d = split_decomposition(m);
  CHECK_FALSE(d.totally_decomposable);
}

TEST_CASE("split decomposition reconstructs d and its splits are weakly compatible") {
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 7);
    auto m = i % 3 ? random_metric(n, rng) : random_tree_metric(n, rng);
    auto d = split_decomposition(m);
    std::vector<Split> splits;
    for (PointId x = 0; x < n; ++x) {
      for (PointId y = 0; y < n; ++y) {
        Rational sum = d.residue(x, y);
        for (const auto& s : d.splits)
          if (s.split.separates(x, y)) sum += s.alpha;
        CHECK(sum == m(x, y));
      }
    }
    for (const auto& s : d.splits) {
      CHECK(s.alpha > 0);
      CHECK((s.split.side_a & 1u) == 1u);
      splits.push_back(s.split);
    }
    CHECK(weak_compatibility(splits, n).holds);
    if (n <= 4) CHECK(d.totally_decomposable);
  }
}

TEST_CASE("split decomposition limit") {
  Rng rng(1);
  CHECK(error_of([&] { split_decomposition(random_metric(kMaxSplitPoints + 1, rng)); }) == ErrorCode::TooManyPoints);
}

TEST_CASE("weak compatibility") {
  std::vector<Split> crossing{Split::canonical(0b0011, 4), Split::canonical(0b0101, 4), Split::canonical(0b1001, 4)};
  auto r = weak_compatibility(crossing, 4);
  CHECK_FALSE(r.holds);
  CHECK(r.points == std::array<PointId, 4>{0, 1, 2, 3});
  CHECK(weak_compatibility({}, 4).holds);
  CHECK(weak_compatibility({crossing[0], crossing[1]}, 4).holds);
}

TEST_CASE("quad coordinates examples") {
  CHECK(quad_coordinates(path4(), 0, 1, 2, 3) == QuadCoordinates{1, 0, 0, 1, 1, 0, 0});
  CHECK(quad_coordinates(cycle4(), 0, 1, 2, 3) == QuadCoordinates{0, 0, 0, 0, 1, 0, 1});
  auto dup = add_point(t345(), rats({0, 3, 4}));
  auto q = quad_coordinates(dup, 0, 3, 1, 2);
  CHECK(q.a == 0);
  CHECK(q.b == 0);
  CHECK(quad_metric(q) == dup.restrict(std::vector<PointId>{0, 3, 1, 2}));
}

TEST_CASE("quad coordinates: efg = 0 and the zero sits on the maximal pairing") {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    auto m = random_metric(4, rng);
    auto q = quad_coordinates(m, 0, 1, 2, 3);
    CHECK(q.e * q.f * q.g == 0);
    const Rational xy_zr = m(0, 1) + m(2, 3), xz_yr = m(0, 2) + m(1, 3), xr_yz = m(0, 3) + m(1, 2);
    const Rational top = std::max({xy_zr, xz_yr, xr_yz});
    if (q.e == 0) CHECK(xy_zr == top);
    if (q.f == 0) CHECK(xz_yr == top);
    if (q.g == 0) CHECK(xr_yz == top);
    auto back = quad_coordinates(quad_metric(random_quad_coordinates(rng)), 0, 1, 2, 3);
    CHECK(back == quad_coordinates(quad_metric(back), 0, 1, 2, 3));
  }
}

TEST_CASE("classify vectors on the 3-4-5 triangle") {
  auto m = ptr(t345());
  auto c = classify_vector(*m, vec(m, rats({0, 3, 4})));
  CHECK((c.in_p && c.minimal && c.lipschitz));
  c = classify_vector(*m, vec(m, rats({1, 2, 3})));
  CHECK((c.in_p && c.minimal));
  c = classify_vector(*m, vec(m, rats({10, 10, 10})));
  CHECK(c.in_p);
  CHECK_FALSE(c.minimal);
  c = classify_vector(*m, vec(m, rats({0, 0, 0})));
  CHECK_FALSE(c.in_p);
}

TEST_CASE("canonical rows and sup-norm distance") {
  auto m = ptr(t345());
  CHECK(canonical_row(m, 0).values == rats({0, 3, 4}));
  CHECK(canonical_row(m, 2).values == rats({4, 5, 0}));
  CHECK(canonical_row(ptr(metric({{0, 5}, {5, 0}})), 0).values == rats({0, 5}));
  CHECK(supnorm_distance(canonical_row(m, 0), canonical_row(m, 1)) == 3);
  CHECK(supnorm_distance(canonical_row(m, 0), vec(m, rats({1, 2, 3}))) == 1);
  auto f = vec(m, rats({1, 2, 3}));
  CHECK(supnorm_distance(f, f) == 0);
  auto other = ptr(metric({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(error_of([&] { supnorm_distance(f, vec(other, rats({1, 1, 1}))); }) == ErrorCode::BaseMismatch);
}

TEST_CASE("canonical embedding is isometric and rows are minimal") {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto m = ptr(random_metric(2 + uniform_below(rng, 7), rng));
    for (PointId x = 0; x < m->size(); ++x) {
      CHECK(classify_vector(*m, canonical_row(m, x)).minimal);
      for (PointId y = 0; y < m->size(); ++y)
        CHECK(supnorm_distance(canonical_row(m, x), canonical_row(m, y)) == (*m)(x, y));
    }
  }
}

TEST_CASE("extend_vector examples") {
  auto m = ptr(t345());
  auto big = ptr(add_point(*m, rats({0, 3, 4})));
  auto g = extend_vector(vec(m, rats({1, 2, 3})), big);
  CHECK(g.values == rats({1, 2, 3, 1}));
  CHECK(extend_vector(canonical_row(m, 1), big).values == canonical_row(big, 1).values);
  auto h = extend_vector(vec(m, rats({1, 2, 3})), std::vector<Rational>{0, 3, 4});
  CHECK(h.values == g.values);
  CHECK(error_of([&] { extend_vector(vec(m, rats({1, 2, 3})), std::vector<Rational>{0, 3, 9}); }) ==
        ErrorCode::InconsistentRow);
}

TEST_CASE("extend_vector preserves minimality and pairwise distances") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 5);
    auto big = ptr(random_metric(n + 1, rng));
    auto small = ptr(big->restrict(all_points(n)));
    auto f = random_minimal_vector(small, rng), g = random_minimal_vector(small, rng);
    auto ef = extend_vector(f, big), eg = extend_vector(g, big);
    CHECK(classify_vector(*big, ef).minimal);
    CHECK(supnorm_distance(ef, eg) == supnorm_distance(f, g));
  }
}

TEST_CASE("move_toward examples") {
  // points r, p, q with r in the middle of a path of length 4
  auto path = ptr(metric({{0, 2, 2}, {2, 0, 4}, {2, 4, 0}}, {"r", "p", "q"}));
  CHECK(move_toward(canonical_row(path, 1), 0, 1).values == rats({1, 1, 3}));

  auto sq = ptr(cycle4());
  auto g = move_toward(canonical_row(sq, 0), 2, 1);
  CHECK(g.values == rats({1, 1, 1, 1}));
  CHECK(move_floor(canonical_row(sq, 0), 2, 1).values == rats({1, 0, 1, 0}));

  auto m = ptr(t345());
  auto f = vec(m, rats({1, 2, 3}));
  CHECK(move_toward(f, 2, 0) == f);
  CHECK(move_toward(f, 2, 3) == canonical_row(m, 2));
  CHECK(error_of([&] { move_toward(f, 2, 4); }) == ErrorCode::DeltaOutOfRange);
  CHECK(error_of([&] { move_toward(f, 2, -1); }) == ErrorCode::DeltaOutOfRange);
}

TEST_CASE("move_toward contract on random metrics") {
  Rng rng(10);
  for (int i = 0; i < 400; ++i) {
    auto m = ptr(random_metric(2 + uniform_below(rng, 5), rng));
    auto f = random_minimal_vector(m, rng);
    const PointId r = uniform_below(rng, m->size());
    const Rational D = supnorm_distance(f, canonical_row(m, r));
    const Rational delta = D * Rational(uniform_below(rng, 9), 8);
    CHECK(contract_holds(f, r, delta, move_toward(f, r, delta)));
  }
}

TEST_CASE("move_toward on trees is the closed-form floor") {
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    auto m = ptr(random_tree_metric(2 + uniform_below(rng, 7), rng));
    auto f = random_minimal_vector(m, rng);
    const PointId r = uniform_below(rng, m->size());
    const Rational D = supnorm_distance(f, canonical_row(m, r));
    const Rational delta = D * Rational(uniform_below(rng, 7), 6);
    std::vector<Rational> floor(m->size());
    for (PointId x = 0; x < m->size(); ++x) floor[x] = std::max<Rational>(f[x] - delta, (*m)(r, x) - (D - delta));
    CHECK(move_toward(f, r, delta).values == floor);
  }
}

TEST_CASE("tight span of the 3-4-5 triangle") {
  auto v = tight_span_vertices(ptr(t345()));
  std::set<std::vector<Rational>> got;
  for (const auto& f : v) got.insert(f.values);
  CHECK(got == std::set<std::vector<Rational>>{rats({0, 3, 4}), rats({3, 0, 5}), rats({4, 5, 0}), rats({1, 2, 3})});
}

TEST_CASE("tight span of small spaces") {
  auto seg = tight_span_vertices(ptr(metric({{0, 5}, {5, 0}})));
  REQUIRE(seg.size() == 2);
  CHECK(seg[0].values == rats({0, 5}));
  CHECK(seg[1].values == rats({5, 0}));

  auto sq = tight_span_vertices(ptr(cycle4()));
  std::set<std::vector<Rational>> got;
  for (const auto& f : sq) got.insert(f.values);
  auto c = cycle4();
  std::set<std::vector<Rational>> rows;
  for (PointId x = 0; x < 4; ++x) rows.insert(std::vector<Rational>(c.row(x).begin(), c.row(x).end()));
  CHECK(got == rows);

  Rng rng(0);
  CHECK(error_of([&] { tight_span_vertices(ptr(random_metric(kMaxVertexPoints + 1, rng))); }) ==
        ErrorCode::TooManyPoints);
}

TEST_CASE("tight span vertices match the functional-graph oracle") {
  Rng rng(13);
  for (int i = 0; i < 80; ++i) {
    const std::size_t n = 1 + uniform_below(rng, 5);
    auto m = ptr(i % 2 ? random_metric(n, rng) : random_tree_metric(n, rng));
    std::set<std::vector<Rational>> got;
    for (const auto& f : tight_span_vertices(m)) got.insert(f.values);
    CHECK(got == brute_vertices(*m));
    for (PointId x = 0; x < n; ++x) CHECK(got.count(canonical_row(m, x).values) == 1);
  }
}
