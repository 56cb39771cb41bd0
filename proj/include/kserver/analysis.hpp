#pragma once

// Potential functions and exact checks of the per-step update conditions.

#include "kserver/optimal.hpp"
#include "kserver/simulation.hpp"

#include <string>

namespace kserver {

struct PotentialBreakdown {
  Rational D;        // server diversity
  Rational M;        // k * matching
  Rational phi_cdrs;
  std::vector<std::vector<Rational>> eps;  // eps[i][j], tension induced by s_i on {a_j, s_j}
  std::vector<Rational> eps_total;         // eps^i
  std::vector<Rational> e;                 // net handicaps E_i - eps^i
  Rational e_max;
  Rational H;
  Rational phi;
};

struct CheckReport {
  Rational lhs;
  Rational bound;
  bool holds = false;
  std::string witness;
};

/// D + 2 * min matching of s with a.
Rational cdrs_potential(const Space& space, const std::vector<Location>& s, const std::vector<Location>& a);

/// Teia potential with a already index-aligned to s. Throws SizeMismatch, and ContractViolation if phi < 0.
PotentialBreakdown teia_potential(const Space& space, const std::vector<Location>& s,
                                  const std::vector<Location>& a, const std::vector<Rational>& E);

/// Reorders `a` by the lexicographically smallest minimum matching with `s`.
std::vector<Location> align(const Space& space, const std::vector<Location>& s, const std::vector<Location>& a);

/// delta_phi - k * cost_adv + cost_alg <= 0.
CheckReport check_handicap_update(const PotentialBreakdown& before, const PotentialBreakdown& after,
                                  std::size_t k, const Rational& cost_adv, const Rational& cost_alg);

/// 2 dxy (2 dxz + dyz) / (dxy + dxz + dyz); 0 when all three vanish. Throws TriangleViolation.
Rational lazy_potential(const Rational& dxy, const Rational& dxz, const Rational& dyz);

struct HarmonicChecks {
  CheckReport active;   // adversary moves its server at z to r and requests r
  CheckReport cryptic;  // adversary moves its server at y to r
};

/// Both left-hand sides must be >= 0. Points are indices of `m`.
HarmonicChecks check_harmonic_updates(const FiniteMetric& m, PointId x, PointId y, PointId z, PointId r);

struct AppendixValues {
  Rational numerator1;
  Rational numerator2;
  Rational direct1;  // active left-hand side times its cleared denominator
  Rational direct2;  // cryptic left-hand side times its cleared denominator
  bool matches() const { return numerator1 == direct1 && numerator2 == direct2; }
};

/// Evaluates the two published numerator polynomials and the direct cleared values.
/// Throws ProductNotZero unless efg = 0, InvalidArgument on a negative coordinate.
AppendixValues appendix_numerators(const QuadCoordinates& q);

struct RatioReport {
  Rational alg_cost;
  Rational opt_cost;
  Rational allowance;
  std::optional<Rational> ratio;             // nullopt when opt = 0 < alg
  std::optional<Rational> adjusted_ratio;    // (alg - allowance) / opt
};

/// Throws SequenceMismatch when the optimum was computed for a different request count.
/// An empty sequence (or alg = opt = 0) reports ratio 1.
RatioReport empirical_ratio(const Transcript& transcript, const OptResult& opt, const Rational& allowance = 0);

// --- Batch verifiers --------------------------------------------------------------

struct VerifyReport {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::string first_witness;  // empty when there were no failures
};

/// HANDICAP against the lazy adversary on random metrics: every step must satisfy the update
/// condition and keep phi >= 0.
VerifyReport verify_teia(std::size_t k, std::size_t steps, std::uint64_t seed);

/// Random split coordinates with one of e, f, g zero: both harmonic inequalities.
VerifyReport verify_harmonic(std::size_t trials, std::uint64_t seed);

/// Random split coordinates: published numerators against the direct cleared evaluation.
VerifyReport verify_appendix(std::size_t trials, std::uint64_t seed);

}  // namespace kserver
