#include "kserver/optimal.hpp"

#include "kserver/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace kserver {

Matching min_matching(std::size_t k, const std::function<Rational(std::size_t, std::size_t)>& cost) {
  if (k > kMaxMatchingSize) {
    throw Error(ErrorCode::InvalidArgument, "matching size " + std::to_string(k) + " exceeds " +
                                                std::to_string(kMaxMatchingSize));
  }
  std::vector<std::vector<Rational>> c(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) c[i][j] = cost(i, j);
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Matching best;
  bool have = false;
  // next_permutation walks in lexicographic order, so the first minimum is the smallest.
  do {
    Rational total = 0;
    for (std::size_t i = 0; i < k; ++i) total += c[i][perm[i]];
    if (!have || total < best.cost) {
      best = {std::move(total), perm};
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Matching min_matching(const FiniteMetric& m, const std::vector<PointId>& a, const std::vector<PointId>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "matched sets differ in size");
  return min_matching(a.size(), [&](std::size_t i, std::size_t j) { return m(a[i], b[j]); });
}

Matching min_matching(const Space& space, const std::vector<Location>& a, const std::vector<Location>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "matched sets differ in size");
  return min_matching(a.size(), [&](std::size_t i, std::size_t j) { return space.distance(a[i], b[j]); });
}

Matching min_matching(const std::vector<CoordinateVector>& a, const std::vector<CoordinateVector>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "matched sets differ in size");
  return min_matching(a.size(), [&](std::size_t i, std::size_t j) { return supnorm_distance(a[i], b[j]); });
}

namespace {

OptResult opt_impl(std::size_t pool, const std::function<Rational(PointId, PointId)>& d, Configuration initial,
                   const std::vector<PointId>& requests) {
  for (auto p : initial) {
    if (p >= pool) throw Error(ErrorCode::RequestOutsideMetric, "initial point outside the metric", {p});
  }
  for (auto r : requests) {
    if (r >= pool) throw Error(ErrorCode::RequestOutsideMetric, "request outside the metric", {r});
  }
  std::sort(initial.begin(), initial.end());
  if (requests.empty()) return {0, {}};
  if (initial.empty()) throw Error(ErrorCode::InvalidArgument, "no servers to serve requests");

  // Lazy schedules suffice: each request either finds a server already there or moves one
  // server onto it. Layer t maps the configuration after request t to (cost, parent).
  struct Entry {
    Rational cost;
    const Configuration* parent;
  };
  std::vector<std::map<Configuration, Entry>> layers(requests.size());
  std::map<Configuration, Entry> start{{initial, {0, nullptr}}};
  const std::map<Configuration, Entry>* prev = &start;
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const PointId r = requests[t];
    auto& next = layers[t];
    auto relax = [&](Configuration c, Rational cost, const Configuration* parent) {
      std::sort(c.begin(), c.end());
      auto it = next.find(c);
      if (it == next.end()) {
        next.emplace(std::move(c), Entry{std::move(cost), parent});
      } else if (cost < it->second.cost || (cost == it->second.cost && *parent < *it->second.parent)) {
        it->second = {std::move(cost), parent};
      }
    };
    for (const auto& [config, entry] : *prev) {
      if (std::find(config.begin(), config.end(), r) != config.end()) {
        relax(config, entry.cost, &config);
        continue;
      }
      for (std::size_t i = 0; i < config.size(); ++i) {
        if (i > 0 && config[i] == config[i - 1]) continue;
        Configuration c = config;
        c[i] = r;
        relax(std::move(c), entry.cost + d(config[i], r), &config);
      }
    }
    prev = &next;
  }
  const auto& last = layers.back();
  auto best = last.begin();
  for (auto it = last.begin(); it != last.end(); ++it) {
    if (it->second.cost < best->second.cost) best = it;
  }
  OptResult out{best->second.cost, std::vector<Configuration>(requests.size())};
  const Configuration* cur = &best->first;
  for (std::size_t t = requests.size(); t-- > 0;) {
    out.path[t] = *cur;
    cur = layers[t].at(*cur).parent;
  }
  return out;
}

}  // namespace

OptResult opt_cost(const Space& space, Configuration initial, const std::vector<PointId>& requests) {
  return opt_impl(space.pool_size(), [&](PointId p, PointId q) { return space.distance(p, q); },
                  std::move(initial), requests);
}

OptResult opt_cost(const FiniteMetric& m, Configuration initial, const std::vector<PointId>& requests) {
  return opt_impl(m.size(), [&](PointId p, PointId q) { return m(p, q); }, std::move(initial), requests);
}

}  // namespace kserver
