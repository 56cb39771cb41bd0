#pragma once

// Adversaries and the simulation loop that produces replayable transcripts.

#include "kserver/servers.hpp"

#include <cstdint>

namespace kserver {

struct AdversaryMove {
  enum class Kind { ActiveRequest, LazyRequest, CrypticMove };

  Kind kind = Kind::ActiveRequest;
  PointId point = 0;       // requested point, or the destination of a cryptic move
  std::size_t server = 0;  // adversary server that moves (active, cryptic) or is requested (lazy)

  bool has_request() const { return kind != Kind::CrypticMove; }
  bool operator==(const AdversaryMove&) const = default;
};

const char* move_kind_name(AdversaryMove::Kind kind);
AdversaryMove::Kind parse_move_kind(std::string_view name);

/// One lazy-adversary decision. `alg` and `adv` are index aligned; at most one pair may differ.
/// Covered: a CrypticMove of a uniformly drawn server to a uniformly drawn pool point away from
/// every algorithm server. Otherwise: a LazyRequest at the open server.
/// Throws TooManyOpenServers or EmptyPool.
AdversaryMove lazy_adversary_step(const Space& space, const std::vector<Location>& alg,
                                  const std::vector<PointId>& adv, Rng& rng);

class Adversary {
 public:
  explicit Adversary(std::vector<PointId> initial) : positions_(std::move(initial)) {}
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;
  /// Chooses the next move and applies it to the adversary's own servers.
  virtual AdversaryMove next(const Space& space, const std::vector<Location>& alg, Rng& rng) = 0;
  /// Called after the algorithm served a request, with the index of the serving server.
  virtual void after_serve(const Space&, const std::vector<Location>&, std::size_t) {}
  /// Number of moves left, or nullopt when unbounded.
  virtual std::optional<std::size_t> remaining() const { return std::nullopt; }

  const std::vector<PointId>& positions() const { return positions_; }

 protected:
  std::vector<PointId> positions_;
};

/// At most one open server; pays only for cryptic moves. Keeps its indices aligned with the
/// algorithm's servers by swapping labels when a non-matched server serves.
class LazyAdversary : public Adversary {
 public:
  using Adversary::Adversary;
  std::string name() const override { return "lazy"; }
  AdversaryMove next(const Space& space, const std::vector<Location>& alg, Rng& rng) override;
  void after_serve(const Space& space, const std::vector<Location>& alg, std::size_t chosen) override;

 private:
  std::optional<std::size_t> open_;
};

/// Requests a uniform pool point; its nearest server goes there first.
class RandomAdversary : public Adversary {
 public:
  using Adversary::Adversary;
  std::string name() const override { return "random"; }
  AdversaryMove next(const Space& space, const std::vector<Location>& alg, Rng& rng) override;
};

/// Re-issues a recorded move sequence verbatim.
class ReplayAdversary : public Adversary {
 public:
  ReplayAdversary(std::vector<PointId> initial, std::vector<AdversaryMove> moves)
      : Adversary(std::move(initial)), moves_(std::move(moves)) {}
  std::string name() const override { return "replay"; }
  AdversaryMove next(const Space& space, const std::vector<Location>& alg, Rng& rng) override;
  std::optional<std::size_t> remaining() const override { return moves_.size() - cursor_; }

 private:
  std::vector<AdversaryMove> moves_;
  std::size_t cursor_ = 0;
};

struct StepRecord {
  AdversaryMove move;
  std::optional<Decision> decision;
  Rational alg_cost;
  Rational adv_cost;
  std::vector<Location> alg_positions;  // after the step
  std::vector<PointId> adv_positions;   // after the step
  std::map<std::string, std::vector<Rational>> state;
};

struct Transcript {
  std::string algorithm;
  std::string adversary;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  RandomSlackRule random_slack_rule = RandomSlackRule::Inverse;
  SpacePtr space;
  std::vector<PointId> initial;
  std::vector<StepRecord> steps;
  Rational alg_total;
  Rational adv_total;

  std::size_t k() const { return initial.size(); }
  std::vector<PointId> requests() const;
  std::vector<AdversaryMove> moves() const;
};

/// Child generator for (seed, trial, stream). Stream 0 drives the adversary, 1 the algorithm.
Rng derive_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

/// `k` distinct pool points drawn from the setup stream (2). Throws InvalidArgument if the pool is too small.
std::vector<PointId> initial_configuration(const Space& space, std::size_t k, std::uint64_t seed,
                                           std::uint64_t trial);

/// Runs `steps` adversary moves (fewer if a replay runs out). Deterministic given the seed.
Transcript run_simulation(const AlgorithmConfig& alg, SpacePtr space, const std::vector<PointId>& initial,
                          Adversary& adversary, std::size_t steps, std::uint64_t seed, std::uint64_t trial = 0);

/// Runs `alg` against the moves recorded in `transcript`, using the transcript's seed and trial.
Transcript replay(const Transcript& transcript, const AlgorithmConfig& alg);

}  // namespace kserver
