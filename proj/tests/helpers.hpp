#pragma once

#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/metric.hpp"
#include "kserver/rational.hpp"
#include "kserver/tspan.hpp"

#include <doctest.h>

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace testutil {

using kserver::Rational;

inline Rational R(const std::string& s) { return kserver::parse_rational(s); }

inline kserver::FiniteMetric metric(std::initializer_list<std::initializer_list<long>> rows,
                                    std::vector<std::string> labels = {}) {
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return kserver::validate_metric(std::move(m), std::move(labels));
}

inline std::shared_ptr<const kserver::FiniteMetric> ptr(kserver::FiniteMetric m) {
  return std::make_shared<const kserver::FiniteMetric>(std::move(m));
}

inline kserver::FiniteMetric t345() { return metric({{0, 3, 4}, {3, 0, 5}, {4, 5, 0}}, {"x", "y", "z"}); }

// u, v, w, z around a unit square; diagonals 2.
inline kserver::FiniteMetric cycle4() {
  return metric({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}}, {"u", "v", "w", "z"});
}

inline kserver::FiniteMetric path4() {
  return metric({{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}});
}

inline std::vector<Rational> rats(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

inline kserver::CoordinateVector vec(const std::shared_ptr<const kserver::FiniteMetric>& base,
                                     std::vector<Rational> values) {
  return kserver::CoordinateVector{base, std::move(values)};
}

template <typename F>
kserver::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const kserver::Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return kserver::ErrorCode::Internal;
}

template <typename F>
kserver::Error error_from(F&& f) {
  try {
    f();
  } catch (const kserver::Error& e) {
    return e;
  }
  FAIL("expected an Error");
  return kserver::Error(kserver::ErrorCode::Internal, "");
}

}  // namespace testutil
