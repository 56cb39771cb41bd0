#include "kserver/generators.hpp"

#include "kserver/error.hpp"

#include <charconv>

namespace kserver {

Rational random_rational(Rng& rng, int max_num, int max_den) {
  const auto num = static_cast<long>(uniform_below(rng, static_cast<std::size_t>(max_num) + 1));
  const auto den = static_cast<long>(uniform_below(rng, static_cast<std::size_t>(max_den)) + 1);
  return Rational(num, den);
}

FiniteMetric random_metric(std::size_t n, Rng& rng, bool allow_zero) {
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational w = allow_zero && uniform_below(rng, 25) == 0 ? Rational(0) : random_rational(rng, 20, 4) + 1;
      d[i][j] = d[j][i] = w;
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
      }
    }
  }
  return validate_metric(std::move(d));
}

FiniteMetric random_tree_metric(std::size_t n, Rng& rng) {
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t parent = uniform_below(rng, i);
    const Rational w = random_rational(rng, 12, 3) + Rational(1, 2);
    for (std::size_t j = 0; j < i; ++j) d[i][j] = d[j][i] = d[parent][j] + w;
  }
  return validate_metric(std::move(d));
}

QuadCoordinates random_quad_coordinates(Rng& rng) {
  auto coord = [&]() { return uniform_below(rng, 5) == 0 ? Rational(0) : random_rational(rng, 30, 6); };
  QuadCoordinates q{coord(), coord(), coord(), coord(), coord(), coord(), coord()};
  switch (uniform_below(rng, 3)) {
    case 0: q.e = 0; break;
    case 1: q.f = 0; break;
    default: q.g = 0; break;
  }
  return q;
}

CoordinateVector random_minimal_vector(const MetricPtr& m, Rng& rng) {
  CoordinateVector f = canonical_row(m, uniform_below(rng, m->size()));
  for (auto& v : f.values) v += random_rational(rng, 10, 3);
  return lower_to_minimal(std::move(f));
}

namespace {

std::size_t parse_count(std::string_view text, const std::string& spec) {
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n == 0) {
    throw Error(ErrorCode::InvalidArgument, "bad pool spec '" + spec + "'");
  }
  return n;
}

}  // namespace

SpacePtr make_pool(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad pool spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::size_t n = parse_count(std::string_view(spec).substr(colon + 1), spec);
  Rng rng = derive_rng(seed, 0, 3);
  if (kind == "line") {
    std::vector<Rational> coords;
    for (std::size_t i = 0; i < n; ++i) coords.push_back(Rational(static_cast<long>(uniform_below(rng, 101))));
    return Space::line(std::move(coords));
  }
  if (kind == "tree") return Space::from_metric(std::make_shared<const FiniteMetric>(random_tree_metric(n, rng)));
  if (kind == "random") return Space::from_metric(std::make_shared<const FiniteMetric>(random_metric(n, rng, false)));
  if (kind == "grid") {
    std::vector<PlanePoint> pts;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    return Space::plane(std::move(pts), Norm::L1);
  }
  if (kind == "plane") {
    std::vector<PlanePoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({static_cast<double>(uniform_below(rng, 101)), static_cast<double>(uniform_below(rng, 101))});
    }
    return Space::plane(std::move(pts), Norm::L2);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pool kind '" + kind + "'");
}

}  // namespace kserver
