#pragma once

// The ten online k-server algorithms. Each has a free step function over explicit state,
// and all of them are also available behind the Algorithm state machine used by simulations.

#include "kserver/space.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace kserver {

using Rng = std::mt19937_64;

struct Phase {
  std::vector<std::size_t> active;
  Rational delta;  // 0 when a single active server walks the rest of the way
};

struct Decision {
  std::size_t chosen = 0;
  std::vector<Rational> moves;  // distance travelled by each server
  Rational total_cost;
  std::optional<std::vector<Rational>> distribution;
  std::vector<Phase> phases;
  std::optional<std::vector<Rational>> virtual_moves;
};

/// Unbiased draw from 0..n-1 by rejection, independent of the standard library's distributions.
std::size_t uniform_below(Rng& rng, std::size_t n);

/// Uniform u in [0,1) at 2^-64 resolution, compared exactly against the cumulative sums.
std::size_t sample_index(const std::vector<Rational>& distribution, Rng& rng);

// --- Line and plane ----------------------------------------------------------

Decision dc_step(std::vector<Rational>& servers, const Rational& r);

/// Two servers in the Euclidean plane. Costs are exact images of the float distances.
Decision slack_coverage_step(std::vector<PlanePoint>& servers, const PlanePoint& r);

// --- Tight span ---------------------------------------------------------------
// Servers are minimal vectors over a common metric and r is a point of that metric.

/// Throws NotATreeMetric when `verify_tree` is set and the base metric fails the four point condition.
Decision tree_step(std::vector<CoordinateVector>& servers, PointId r, bool verify_tree = true);

/// k = 2.
Decision tight_span_step(std::vector<CoordinateVector>& servers, PointId r);

Decision equipoise_step(std::vector<CoordinateVector>& servers, PointId r);

// --- Any metric -----------------------------------------------------------------

struct Balance2State {
  std::vector<Location> servers;
  std::vector<Rational> cost;  // C_i
};
Decision balance2_step(const Space& space, Balance2State& state, const Location& r);

/// k = 2. Only e_1 - e_2 is kept.
struct BalanceSlackState {
  std::vector<Location> servers;
  Rational diff;
};
Decision balance_slack_step(const Space& space, BalanceSlackState& state, const Location& r);

struct HandicapState {
  std::vector<Location> servers;
  std::vector<Rational> handicap;  // E_i
};
Decision handicap_step(const Space& space, HandicapState& state, const Location& r);

Decision harmonic_step(const Space& space, std::vector<Location>& servers, const Location& r, Rng& rng);

enum class RandomSlackRule {
  Inverse,  // P(s1 serves) = eps2 / (eps1 + eps2)
  Direct,   // P(s1 serves) = eps1 / (eps1 + eps2)
};
Decision random_slack_step(const Space& space, std::vector<Location>& servers, const Location& r, Rng& rng,
                           RandomSlackRule rule = RandomSlackRule::Inverse);

// --- State machines --------------------------------------------------------------

enum class AlgorithmKind {
  DoubleCoverage,
  Tree,
  SlackCoverage,
  TightSpan,
  Equipoise,
  Balance2,
  BalanceSlack,
  Handicap,
  Harmonic,
  RandomSlack,
};

const char* algorithm_name(AlgorithmKind kind);
/// Accepts dc | tree | sc | tightspan | equipoise | balance2 | balanceslack | handicap | harmonic | randomslack.
AlgorithmKind parse_algorithm(std::string_view name);

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::Handicap;
  RandomSlackRule random_slack_rule = RandomSlackRule::Inverse;
};

class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual AlgorithmKind kind() const = 0;
  virtual const std::vector<Location>& positions() const = 0;
  virtual Decision serve(PointId request, Rng& rng) = 0;
  /// Named scalar vectors describing the internal state (C, E, e1-e2, virtual costs, ...).
  virtual std::map<std::string, std::vector<Rational>> state() const { return {}; }

  std::size_t k() const { return positions().size(); }
};

/// Throws IncompatibleAlgorithmMetric when the space does not suit the algorithm
/// (dc needs the line, sc the Euclidean plane, tree a tree metric, and so on).
std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& config, SpacePtr space,
                                          const std::vector<PointId>& initial);

/// Runs a tight-span algorithm on virtual servers over the growing set of seen points and
/// moves real server i to r only when virtual server i serves.
class VirtualWrap : public Algorithm {
 public:
  using Step = std::function<Decision(std::vector<CoordinateVector>&, PointId)>;

  VirtualWrap(AlgorithmKind kind, SpacePtr space, const std::vector<PointId>& initial, Step step);

  AlgorithmKind kind() const override { return kind_; }
  const std::vector<Location>& positions() const override { return real_; }
  Decision serve(PointId request, Rng& rng) override;
  std::map<std::string, std::vector<Rational>> state() const override;

  const std::vector<CoordinateVector>& virtual_positions() const { return virtual_; }
  const std::vector<Rational>& real_costs() const { return real_cost_; }
  const std::vector<Rational>& virtual_costs() const { return virtual_cost_; }
  const MetricPtr& universe() const { return universe_; }

 private:
  std::size_t universe_index(PointId p);

  AlgorithmKind kind_;
  SpacePtr space_;
  Step step_;
  MetricPtr universe_;
  std::vector<PointId> pool_of_;                  // universe index -> pool point
  std::vector<std::optional<std::size_t>> index_of_;  // pool point -> universe index
  std::vector<CoordinateVector> virtual_;
  std::vector<PointId> real_point_;
  std::vector<Location> real_;
  std::vector<Rational> real_cost_;
  std::vector<Rational> virtual_cost_;
};

/// Process-wide tally of the real <= virtual cost checks made by every VirtualWrap.
struct VirtualWrapAudit {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
};
VirtualWrapAudit virtual_wrap_audit();

}  // namespace kserver
