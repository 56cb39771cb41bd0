#include "kserver/servers.hpp"

#include "kserver/error.hpp"
#include "kserver/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kserver {

namespace {

std::atomic<std::uint64_t> g_wrap_checks{0};
std::atomic<std::uint64_t> g_wrap_violations{0};

Decision serve_with(std::size_t k, std::size_t chosen, Rational cost) {
  Decision d;
  d.chosen = chosen;
  d.moves.assign(k, Rational(0));
  d.moves[chosen] = cost;
  d.total_cost = std::move(cost);
  return d;
}

std::vector<Rational> distances_to(const Space& space, const std::vector<Location>& servers, const Location& r) {
  std::vector<Rational> out;
  out.reserve(servers.size());
  for (const auto& s : servers) out.push_back(space.distance(s, r));
  return out;
}

std::optional<std::size_t> first_zero(const std::vector<Rational>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) return i;
  }
  return std::nullopt;
}

void require_two(std::size_t k, const char* what) {
  if (k != 2) throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs exactly two servers");
}

}  // namespace

std::size_t uniform_below(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

std::size_t sample_index(const std::vector<Rational>& distribution, Rng& rng) {
  static const Rational scale = Rational(Integer(1) << 64);
  const Rational u = Rational(Integer(rng())) / scale;
  Rational cumulative = 0;
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    cumulative += distribution[i];
    if (u < cumulative) return i;
  }
  // Only reachable when the distribution is deficient; fall back to the last positive entry.
  for (std::size_t i = distribution.size(); i-- > 0;) {
    if (distribution[i] > 0) return i;
  }
  return 0;
}

// --- Line and plane ----------------------------------------------------------

Decision dc_step(std::vector<Rational>& servers, const Rational& r) {
  const std::size_t k = servers.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "no servers");
  for (std::size_t i = 0; i < k; ++i) {
    if (servers[i] == r) return serve_with(k, i, 0);
  }
  std::optional<std::size_t> left, right;
  for (std::size_t i = 0; i < k; ++i) {
    if (servers[i] < r && (!left || servers[i] > servers[*left])) left = i;
    if (servers[i] > r && (!right || servers[i] < servers[*right])) right = i;
  }
  if (!left || !right) {
    const std::size_t i = left ? *left : *right;
    Rational cost = abs(servers[i] - r);
    servers[i] = r;
    return serve_with(k, i, std::move(cost));
  }
  const Rational delta = std::min(r - servers[*left], servers[*right] - r);
  servers[*left] += delta;
  servers[*right] -= delta;
  Decision d;
  d.moves.assign(k, Rational(0));
  d.moves[*left] = delta;
  d.moves[*right] = delta;
  d.total_cost = 2 * delta;
  d.chosen = servers[*left] == r ? *left : *right;
  if (servers[*left] == r && servers[*right] == r) d.chosen = std::min(*left, *right);
  return d;
}

Decision slack_coverage_step(std::vector<PlanePoint>& servers, const PlanePoint& r) {
  require_two(servers.size(), "slack coverage");
  const double d1 = lp_distance(servers[0], r, Norm::L2);
  const double d2 = lp_distance(servers[1], r, Norm::L2);
  const double d12 = lp_distance(servers[0], servers[1], Norm::L2);
  const std::size_t i = d1 <= d2 ? 0 : 1;
  const std::size_t j = 1 - i;
  const double di = i == 0 ? d1 : d2;
  const double dj = i == 0 ? d2 : d1;
  double delta = std::clamp(0.5 * (di + d12 - dj), 0.0, dj);
  Decision d;
  d.chosen = i;
  d.moves.assign(2, Rational(0));
  d.moves[i] = rational_from_double(di);
  if (dj > 0 && delta > 0) {
    const double t = delta / dj;
    servers[j] = {servers[j].x + t * (r.x - servers[j].x), servers[j].y + t * (r.y - servers[j].y)};
    d.moves[j] = rational_from_double(delta);
  }
  servers[i] = r;
  d.total_cost = d.moves[0] + d.moves[1];
  return d;
}

// --- Tight span ---------------------------------------------------------------

Decision tree_step(std::vector<CoordinateVector>& s, PointId r, bool verify_tree) {
  const std::size_t k = s.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "no servers");
  const MetricPtr& base = s[0].base;
  if (verify_tree) {
    auto fp = four_point_condition(*base);
    if (!fp.holds) {
      const auto& w = *fp.witness;
      throw Error(ErrorCode::NotATreeMetric, "metric fails the four point condition", {w[0], w[1], w[2], w[3]});
    }
  }
  Decision d;
  d.moves.assign(k, Rational(0));
  auto at_r = [&]() -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < k; ++i) {
      if (s[i][r] == 0) return i;
    }
    return std::nullopt;
  };
  while (!at_r()) {
    if (d.phases.size() >= k) {
      throw Error(ErrorCode::Internal, "tree step did not finish within k phases", {r});
    }
    std::vector<Rational> dr(k);
    for (std::size_t i = 0; i < k; ++i) dr[i] = s[i][r];
    std::vector<std::vector<Rational>> dd(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) dd[i][j] = dd[j][i] = supnorm_distance(s[i], s[j]);
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < k; ++i) {
      bool blocked = false;
      for (std::size_t j = 0; j < k && !blocked; ++j) {
        if (j == i) continue;
        blocked = dr[i] == dd[i][j] + dr[j] && (dr[j] < dr[i] || j < i);
      }
      if (!blocked) active.push_back(i);
    }
    if (active.size() == 1) {
      const std::size_t i = active[0];
      d.moves[i] += dr[i];
      d.phases.push_back({active, dr[i]});
      s[i] = canonical_row(base, r);
      break;
    }
    std::optional<Rational> delta;
    for (auto i : active) {
      for (auto j : active) {
        if (i == j) continue;
        Rational v = (dr[i] + dd[i][j] - dr[j]) / 2;
        if (!delta || v < *delta) delta = std::move(v);
      }
    }
    if (*delta <= 0) throw Error(ErrorCode::Internal, "tree phase made no progress", {r});
    for (auto i : active) {
      s[i] = move_toward(s[i], r, *delta);
      d.moves[i] += *delta;
    }
    d.phases.push_back({active, *delta});
  }
  d.chosen = *at_r();
  d.total_cost = std::accumulate(d.moves.begin(), d.moves.end(), Rational(0));
  return d;
}

Decision tight_span_step(std::vector<CoordinateVector>& s, PointId r) {
  require_two(s.size(), "the tight span algorithm");
  const Rational d1 = s[0][r];
  const Rational d2 = s[1][r];
  const Rational d12 = supnorm_distance(s[0], s[1]);
  const Rational eps1 = (d1 + d12 - d2) / 2;
  const Rational eps2 = (d2 + d12 - d1) / 2;
  const std::size_t i = eps1 <= eps2 ? 0 : 1;
  const std::size_t j = 1 - i;
  const Rational& delta = i == 0 ? eps1 : eps2;
  Decision d;
  d.chosen = i;
  d.moves.assign(2, Rational(0));
  d.moves[i] = i == 0 ? d1 : d2;
  d.moves[j] = delta;
  s[j] = move_toward(s[j], r, delta);
  s[i] = canonical_row(s[i].base, r);
  d.total_cost = d.moves[0] + d.moves[1];
  return d;
}

Decision equipoise_step(std::vector<CoordinateVector>& s, PointId r) {
  const std::size_t k = s.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "no servers");
  const MetricPtr& base = s[0].base;

  struct Edge {
    Rational w;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      edges.push_back({supnorm_distance(s[i], s[j]) + s[i][r] + s[j][r], i, j});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<CoordinateVector> targets{canonical_row(base, r)};
  for (const auto& e : edges) {
    const std::size_t a = find(e.i), b = find(e.j);
    if (a == b) continue;
    parent[a] = b;
    std::vector<CoordinateVector> pair{s[e.i], s[e.j]};
    const Decision local = tight_span_step(pair, r);
    targets.push_back(pair[1 - local.chosen]);
  }

  const Matching m = min_matching(s, targets);
  Decision d;
  d.moves.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    CoordinateVector& next = targets[m.assignment[i]];
    d.moves[i] = supnorm_distance(s[i], next);
    if (m.assignment[i] == 0) d.chosen = i;
  }
  for (std::size_t i = 0; i < k; ++i) s[i] = targets[m.assignment[i]];
  d.total_cost = m.cost;
  return d;
}

// --- Any metric -----------------------------------------------------------------

Decision balance2_step(const Space& space, Balance2State& st, const Location& r) {
  const auto dist = distances_to(space, st.servers, r);
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (st.cost[i] + 2 * dist[i] < st.cost[best] + 2 * dist[best]) best = i;
  }
  st.cost[best] += dist[best];
  st.servers[best] = r;
  return serve_with(dist.size(), best, dist[best]);
}

Decision balance_slack_step(const Space& space, BalanceSlackState& st, const Location& r) {
  require_two(st.servers.size(), "balance slack");
  const Rational d1 = space.distance(st.servers[0], r);
  const Rational d2 = space.distance(st.servers[1], r);
  const Rational d12 = space.distance(st.servers[0], st.servers[1]);
  const Rational eps1 = (d1 + d12 - d2) / 2;
  const Rational eps2 = (d2 + d12 - d1) / 2;
  if (st.diff + eps1 <= eps2) {
    st.diff += eps1;
    st.servers[0] = r;
    return serve_with(2, 0, d1);
  }
  st.diff -= eps2;
  st.servers[1] = r;
  return serve_with(2, 1, d2);
}

Decision handicap_step(const Space& space, HandicapState& st, const Location& r) {
  const std::size_t k = st.servers.size();
  const auto dist = distances_to(space, st.servers, r);
  std::size_t i = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (st.handicap[j] + dist[j] < st.handicap[i] + dist[i]) i = j;
  }
  for (std::size_t j = 0; j < k; ++j) {
    st.handicap[j] += (dist[i] + dist[j] - space.distance(st.servers[i], st.servers[j])) / 2;
  }
  st.servers[i] = r;
  return serve_with(k, i, dist[i]);
}

Decision harmonic_step(const Space& space, std::vector<Location>& servers, const Location& r, Rng& rng) {
  const std::size_t k = servers.size();
  const auto dist = distances_to(space, servers, r);
  std::vector<Rational> p(k);
  if (auto z = first_zero(dist)) {
    p[*z] = 1;
  } else {
    Rational total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = 1 / dist[i];
      total += p[i];
    }
    for (auto& v : p) v /= total;
  }
  const std::size_t i = first_zero(dist) ? *first_zero(dist) : sample_index(p, rng);
  servers[i] = r;
  Decision d = serve_with(k, i, dist[i]);
  d.distribution = std::move(p);
  return d;
}

Decision random_slack_step(const Space& space, std::vector<Location>& servers, const Location& r, Rng& rng,
                           RandomSlackRule rule) {
  require_two(servers.size(), "random slack");
  const Rational d1 = space.distance(servers[0], r);
  const Rational d2 = space.distance(servers[1], r);
  const Rational d12 = space.distance(servers[0], servers[1]);
  const Rational eps1 = (d1 + d12 - d2) / 2;
  const Rational eps2 = (d2 + d12 - d1) / 2;
  std::vector<Rational> p(2);
  std::size_t i = 0;
  if (eps1 + eps2 == 0) {
    p[0] = 1;
  } else {
    p[0] = (rule == RandomSlackRule::Inverse ? eps2 : eps1) / (eps1 + eps2);
    p[1] = 1 - p[0];
    i = sample_index(p, rng);
  }
  servers[i] = r;
  Decision d = serve_with(2, i, i == 0 ? d1 : d2);
  d.distribution = std::move(p);
  return d;
}

// --- State machines --------------------------------------------------------------

const char* algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::DoubleCoverage: return "dc";
    case AlgorithmKind::Tree: return "tree";
    case AlgorithmKind::SlackCoverage: return "sc";
    case AlgorithmKind::TightSpan: return "tightspan";
    case AlgorithmKind::Equipoise: return "equipoise";
    case AlgorithmKind::Balance2: return "balance2";
    case AlgorithmKind::BalanceSlack: return "balanceslack";
    case AlgorithmKind::Handicap: return "handicap";
    case AlgorithmKind::Harmonic: return "harmonic";
    case AlgorithmKind::RandomSlack: return "randomslack";
  }
  return "?";
}

AlgorithmKind parse_algorithm(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(AlgorithmKind::RandomSlack); ++i) {
    const auto kind = static_cast<AlgorithmKind>(i);
    if (name == algorithm_name(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

namespace {

class LineAlgorithm : public Algorithm {
 public:
  LineAlgorithm(SpacePtr space, const std::vector<PointId>& initial) : space_(std::move(space)) {
    for (auto p : initial) {
      line_.push_back(space_->line_coordinates()[p]);
      positions_.push_back(line_.back());
    }
  }
  AlgorithmKind kind() const override { return AlgorithmKind::DoubleCoverage; }
  const std::vector<Location>& positions() const override { return positions_; }
  Decision serve(PointId request, Rng&) override {
    Decision d = dc_step(line_, space_->line_coordinates().at(request));
    for (std::size_t i = 0; i < line_.size(); ++i) positions_[i] = line_[i];
    return d;
  }

 private:
  SpacePtr space_;
  std::vector<Rational> line_;
  std::vector<Location> positions_;
};

class PlaneAlgorithm : public Algorithm {
 public:
  PlaneAlgorithm(SpacePtr space, const std::vector<PointId>& initial) : space_(std::move(space)) {
    for (auto p : initial) {
      points_.push_back(space_->plane_points()[p]);
      positions_.push_back(points_.back());
    }
  }
  AlgorithmKind kind() const override { return AlgorithmKind::SlackCoverage; }
  const std::vector<Location>& positions() const override { return positions_; }
  Decision serve(PointId request, Rng&) override {
    Decision d = slack_coverage_step(points_, space_->plane_points().at(request));
    for (std::size_t i = 0; i < points_.size(); ++i) positions_[i] = points_[i];
    return d;
  }

 private:
  SpacePtr space_;
  std::vector<PlanePoint> points_;
  std::vector<Location> positions_;
};

std::vector<Location> locations(const Space& space, const std::vector<PointId>& points) {
  std::vector<Location> out;
  for (auto p : points) out.push_back(space.location(p));
  return out;
}

class Balance2Algorithm : public Algorithm {
 public:
  Balance2Algorithm(SpacePtr space, const std::vector<PointId>& initial)
      : space_(std::move(space)), st_{locations(*space_, initial), std::vector<Rational>(initial.size())} {}
  AlgorithmKind kind() const override { return AlgorithmKind::Balance2; }
  const std::vector<Location>& positions() const override { return st_.servers; }
  Decision serve(PointId request, Rng&) override { return balance2_step(*space_, st_, space_->location(request)); }
  std::map<std::string, std::vector<Rational>> state() const override { return {{"C", st_.cost}}; }

 private:
  SpacePtr space_;
  Balance2State st_;
};

class BalanceSlackAlgorithm : public Algorithm {
 public:
  BalanceSlackAlgorithm(SpacePtr space, const std::vector<PointId>& initial)
      : space_(std::move(space)), st_{locations(*space_, initial), 0} {}
  AlgorithmKind kind() const override { return AlgorithmKind::BalanceSlack; }
  const std::vector<Location>& positions() const override { return st_.servers; }
  Decision serve(PointId request, Rng&) override {
    return balance_slack_step(*space_, st_, space_->location(request));
  }
  std::map<std::string, std::vector<Rational>> state() const override { return {{"e1-e2", {st_.diff}}}; }

 private:
  SpacePtr space_;
  BalanceSlackState st_;
};

class HandicapAlgorithm : public Algorithm {
 public:
  HandicapAlgorithm(SpacePtr space, const std::vector<PointId>& initial)
      : space_(std::move(space)), st_{locations(*space_, initial), std::vector<Rational>(initial.size())} {}
  AlgorithmKind kind() const override { return AlgorithmKind::Handicap; }
  const std::vector<Location>& positions() const override { return st_.servers; }
  Decision serve(PointId request, Rng&) override { return handicap_step(*space_, st_, space_->location(request)); }
  std::map<std::string, std::vector<Rational>> state() const override { return {{"E", st_.handicap}}; }

 private:
  SpacePtr space_;
  HandicapState st_;
};

class HarmonicAlgorithm : public Algorithm {
 public:
  HarmonicAlgorithm(SpacePtr space, const std::vector<PointId>& initial)
      : space_(std::move(space)), servers_(locations(*space_, initial)) {}
  AlgorithmKind kind() const override { return AlgorithmKind::Harmonic; }
  const std::vector<Location>& positions() const override { return servers_; }
  Decision serve(PointId request, Rng& rng) override {
    return harmonic_step(*space_, servers_, space_->location(request), rng);
  }

 private:
  SpacePtr space_;
  std::vector<Location> servers_;
};

class RandomSlackAlgorithm : public Algorithm {
 public:
  RandomSlackAlgorithm(SpacePtr space, const std::vector<PointId>& initial, RandomSlackRule rule)
      : space_(std::move(space)), servers_(locations(*space_, initial)), rule_(rule) {}
  AlgorithmKind kind() const override { return AlgorithmKind::RandomSlack; }
  const std::vector<Location>& positions() const override { return servers_; }
  Decision serve(PointId request, Rng& rng) override {
    return random_slack_step(*space_, servers_, space_->location(request), rng, rule_);
  }

 private:
  SpacePtr space_;
  std::vector<Location> servers_;
  RandomSlackRule rule_;
};

[[noreturn]] void incompatible(AlgorithmKind kind, const std::string& why) {
  throw Error(ErrorCode::IncompatibleAlgorithmMetric, std::string(algorithm_name(kind)) + " " + why);
}

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& config, SpacePtr space,
                                          const std::vector<PointId>& initial) {
  const AlgorithmKind kind = config.kind;
  const std::size_t k = initial.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "at least one server is required");
  for (auto p : initial) space->location(p);

  const bool two = k == 2;
  switch (kind) {
    case AlgorithmKind::DoubleCoverage:
      if (space->kind() != SpaceKind::Line) incompatible(kind, "needs a line pool");
      return std::make_unique<LineAlgorithm>(std::move(space), initial);
    case AlgorithmKind::SlackCoverage:
      if (space->kind() != SpaceKind::Plane || space->norm() != Norm::L2) {
        incompatible(kind, "needs a Euclidean plane pool");
      }
      if (!two) incompatible(kind, "needs k = 2");
      return std::make_unique<PlaneAlgorithm>(std::move(space), initial);
    case AlgorithmKind::Tree:
    case AlgorithmKind::TightSpan:
    case AlgorithmKind::Equipoise: {
      if (!space->metric()) incompatible(kind, "needs an exact pool metric");
      VirtualWrap::Step step;
      if (kind == AlgorithmKind::Tree) {
        auto fp = four_point_condition(*space->metric());
        if (!fp.holds) {
          const auto& w = *fp.witness;
          throw Error(ErrorCode::NotATreeMetric, "pool metric fails the four point condition",
                      {w[0], w[1], w[2], w[3]});
        }
        step = [](std::vector<CoordinateVector>& s, PointId r) { return tree_step(s, r, false); };
      } else if (kind == AlgorithmKind::TightSpan) {
        if (!two) incompatible(kind, "needs k = 2");
        step = tight_span_step;
      } else {
        if (k > kMaxMatchingSize) incompatible(kind, "supports at most 8 servers");
        step = equipoise_step;
      }
      return std::make_unique<VirtualWrap>(kind, std::move(space), initial, std::move(step));
    }
    case AlgorithmKind::Balance2:
      return std::make_unique<Balance2Algorithm>(std::move(space), initial);
    case AlgorithmKind::BalanceSlack:
      if (!two) incompatible(kind, "needs k = 2");
      return std::make_unique<BalanceSlackAlgorithm>(std::move(space), initial);
    case AlgorithmKind::Handicap:
      return std::make_unique<HandicapAlgorithm>(std::move(space), initial);
    case AlgorithmKind::Harmonic:
      return std::make_unique<HarmonicAlgorithm>(std::move(space), initial);
    case AlgorithmKind::RandomSlack:
      if (!two) incompatible(kind, "needs k = 2");
      return std::make_unique<RandomSlackAlgorithm>(std::move(space), initial, config.random_slack_rule);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm");
}

// --- Virtual servers -------------------------------------------------------------

VirtualWrap::VirtualWrap(AlgorithmKind kind, SpacePtr space, const std::vector<PointId>& initial, Step step)
    : kind_(kind), space_(std::move(space)), step_(std::move(step)) {
  if (!space_->metric()) throw Error(ErrorCode::IncompatibleAlgorithmMetric, "virtual servers need a pool metric");
  index_of_.resize(space_->pool_size());
  for (auto p : initial) {
    if (!index_of_.at(p)) {
      index_of_[p] = pool_of_.size();
      pool_of_.push_back(p);
    }
  }
  universe_ = std::make_shared<const FiniteMetric>(space_->metric()->restrict(pool_of_));
  for (auto p : initial) {
    virtual_.push_back(canonical_row(universe_, *index_of_[p]));
    real_point_.push_back(p);
    real_.push_back(space_->location(p));
  }
  real_cost_.assign(initial.size(), Rational(0));
  virtual_cost_.assign(initial.size(), Rational(0));
}

std::size_t VirtualWrap::universe_index(PointId p) {
  if (p >= index_of_.size()) throw Error(ErrorCode::RequestOutsideMetric, "request outside the pool", {p});
  if (index_of_[p]) return *index_of_[p];
  std::vector<Rational> row;
  row.reserve(pool_of_.size());
  for (auto q : pool_of_) row.push_back((*space_->metric())(p, q));
  universe_ = std::make_shared<const FiniteMetric>(add_point(*universe_, row));
  for (auto& v : virtual_) v = extend_vector(v, universe_);
  index_of_[p] = pool_of_.size();
  pool_of_.push_back(p);
  return *index_of_[p];
}

Decision VirtualWrap::serve(PointId request, Rng&) {
  const std::size_t u = universe_index(request);
  Decision inner = step_(virtual_, u);
  const std::size_t k = virtual_.size();
  Decision d;
  d.chosen = inner.chosen;
  d.phases = std::move(inner.phases);
  d.moves.assign(k, Rational(0));
  d.moves[d.chosen] = space_->distance(real_point_[d.chosen], request);
  d.total_cost = d.moves[d.chosen];
  real_point_[d.chosen] = request;
  real_[d.chosen] = space_->location(request);
  for (std::size_t i = 0; i < k; ++i) {
    real_cost_[i] += d.moves[i];
    virtual_cost_[i] += inner.moves[i];
    ++g_wrap_checks;
    if (real_cost_[i] > virtual_cost_[i]) ++g_wrap_violations;
  }
  d.virtual_moves = std::move(inner.moves);
  return d;
}

std::map<std::string, std::vector<Rational>> VirtualWrap::state() const {
  return {{"real_cost", real_cost_}, {"virtual_cost", virtual_cost_}};
}

VirtualWrapAudit virtual_wrap_audit() { return {g_wrap_checks.load(), g_wrap_violations.load()}; }

}  // namespace kserver
