#include "kserver/simulation.hpp"

#include "kserver/error.hpp"

#include <numeric>

namespace kserver {

const char* move_kind_name(AdversaryMove::Kind kind) {
  switch (kind) {
    case AdversaryMove::Kind::ActiveRequest: return "active";
    case AdversaryMove::Kind::LazyRequest: return "lazy";
    case AdversaryMove::Kind::CrypticMove: return "cryptic";
  }
  return "?";
}

AdversaryMove::Kind parse_move_kind(std::string_view name) {
  if (name == "active") return AdversaryMove::Kind::ActiveRequest;
  if (name == "lazy") return AdversaryMove::Kind::LazyRequest;
  if (name == "cryptic") return AdversaryMove::Kind::CrypticMove;
  throw Error(ErrorCode::Parse, "unknown move kind '" + std::string(name) + "'");
}

AdversaryMove lazy_adversary_step(const Space& space, const std::vector<Location>& alg,
                                  const std::vector<PointId>& adv, Rng& rng) {
  if (alg.size() != adv.size()) throw Error(ErrorCode::SizeMismatch, "server counts differ");
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i < adv.size(); ++i) {
    if (space.same_place(alg[i], space.location(adv[i]))) continue;
    if (open) throw Error(ErrorCode::TooManyOpenServers, "more than one open server", {*open, i});
    open = i;
  }
  if (open) return {AdversaryMove::Kind::LazyRequest, adv[*open], *open};

  std::vector<PointId> free;
  for (PointId p = 0; p < space.pool_size(); ++p) {
    const Location loc = space.location(p);
    bool covered = false;
    for (const auto& s : alg) covered = covered || space.same_place(s, loc);
    if (!covered) free.push_back(p);
  }
  if (free.empty()) throw Error(ErrorCode::EmptyPool, "every pool point holds an algorithm server");
  const std::size_t server = uniform_below(rng, adv.size());
  return {AdversaryMove::Kind::CrypticMove, free[uniform_below(rng, free.size())], server};
}

AdversaryMove LazyAdversary::next(const Space& space, const std::vector<Location>& alg, Rng& rng) {
  AdversaryMove move = lazy_adversary_step(space, alg, positions_, rng);
  if (move.kind == AdversaryMove::Kind::CrypticMove) positions_[move.server] = move.point;
  open_ = move.server;
  return move;
}

void LazyAdversary::after_serve(const Space&, const std::vector<Location>&, std::size_t chosen) {
  if (open_ && chosen != *open_) std::swap(positions_[chosen], positions_[*open_]);
  open_.reset();
}

AdversaryMove RandomAdversary::next(const Space& space, const std::vector<Location>&, Rng& rng) {
  const PointId r = uniform_below(rng, space.pool_size());
  std::size_t best = 0;
  Rational best_d = space.distance(positions_[0], r);
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    Rational d = space.distance(positions_[i], r);
    if (d < best_d) {
      best = i;
      best_d = std::move(d);
    }
  }
  positions_[best] = r;
  return {AdversaryMove::Kind::ActiveRequest, r, best};
}

AdversaryMove ReplayAdversary::next(const Space& space, const std::vector<Location>&, Rng&) {
  if (cursor_ >= moves_.size()) throw Error(ErrorCode::InvalidArgument, "replay sequence exhausted");
  const AdversaryMove move = moves_[cursor_++];
  if (move.server >= positions_.size()) throw Error(ErrorCode::Parse, "recorded move names a missing server");
  if (move.point >= space.pool_size()) throw Error(ErrorCode::RequestOutsideMetric, "recorded point outside the pool");
  if (move.kind != AdversaryMove::Kind::LazyRequest) positions_[move.server] = move.point;
  return move;
}

std::vector<PointId> Transcript::requests() const {
  std::vector<PointId> out;
  for (const auto& s : steps) {
    if (s.move.has_request()) out.push_back(s.move.point);
  }
  return out;
}

std::vector<AdversaryMove> Transcript::moves() const {
  std::vector<AdversaryMove> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.move);
  return out;
}

Rng derive_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

std::vector<PointId> initial_configuration(const Space& space, std::size_t k, std::uint64_t seed,
                                           std::uint64_t trial) {
  const std::size_t n = space.pool_size();
  if (k > n) {
    throw Error(ErrorCode::InvalidArgument,
                "pool of " + std::to_string(n) + " points cannot hold " + std::to_string(k) + " servers");
  }
  Rng rng = derive_rng(seed, trial, 2);
  std::vector<PointId> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + uniform_below(rng, n - i)]);
  pool.resize(k);
  return pool;
}

Transcript run_simulation(const AlgorithmConfig& alg, SpacePtr space, const std::vector<PointId>& initial,
                          Adversary& adversary, std::size_t steps, std::uint64_t seed, std::uint64_t trial) {
  auto algorithm = make_algorithm(alg, space, initial);
  if (adversary.positions().size() != initial.size()) {
    throw Error(ErrorCode::SizeMismatch, "adversary and algorithm have different server counts");
  }
  Transcript t;
  t.algorithm = algorithm_name(alg.kind);
  t.adversary = adversary.name();
  t.seed = seed;
  t.trial = trial;
  t.random_slack_rule = alg.random_slack_rule;
  t.space = space;
  t.initial = initial;
  t.alg_total = 0;
  t.adv_total = 0;

  Rng adv_rng = derive_rng(seed, trial, 0);
  Rng alg_rng = derive_rng(seed, trial, 1);
  for (std::size_t step = 0; step < steps; ++step) {
    if (auto left = adversary.remaining(); left && *left == 0) break;
    const std::vector<PointId> before = adversary.positions();
    StepRecord rec;
    rec.move = adversary.next(*space, algorithm->positions(), adv_rng);
    rec.adv_cost = 0;
    for (std::size_t i = 0; i < before.size(); ++i) rec.adv_cost += space->distance(before[i], adversary.positions()[i]);
    rec.alg_cost = 0;
    if (rec.move.has_request()) {
      rec.decision = algorithm->serve(rec.move.point, alg_rng);
      rec.alg_cost = rec.decision->total_cost;
      adversary.after_serve(*space, algorithm->positions(), rec.decision->chosen);
    }
    rec.alg_positions = algorithm->positions();
    rec.adv_positions = adversary.positions();
    rec.state = algorithm->state();
    t.alg_total += rec.alg_cost;
    t.adv_total += rec.adv_cost;
    t.steps.push_back(std::move(rec));
  }
  return t;
}

Transcript replay(const Transcript& transcript, const AlgorithmConfig& alg) {
  ReplayAdversary adversary(transcript.initial, transcript.moves());
  return run_simulation(alg, transcript.space, transcript.initial, adversary, transcript.steps.size(),
                        transcript.seed, transcript.trial);
}

}  // namespace kserver
