#include "kserver/analysis.hpp"

#include "kserver/error.hpp"
#include "kserver/generators.hpp"

#include <json.hpp>

#include <array>

namespace kserver {

namespace {

struct Monomial {
  int coefficient;
  std::array<int, 7> exponents;
};

#include "appendix_tables.inc"

template <std::size_t N>
Rational evaluate(const std::array<Monomial, N>& table, const std::array<Rational, 7>& vars) {
  std::array<std::array<Rational, 6>, 7> powers;
  for (std::size_t v = 0; v < 7; ++v) {
    powers[v][0] = 1;
    for (std::size_t p = 1; p < 6; ++p) powers[v][p] = powers[v][p - 1] * vars[v];
  }
  Rational total = 0;
  for (const auto& m : table) {
    Rational term = m.coefficient;
    for (std::size_t v = 0; v < 7; ++v) {
      if (m.exponents[v]) term *= powers[v][m.exponents[v]];
    }
    total += term;
  }
  return total;
}

std::string quad_witness(const QuadCoordinates& q) {
  nlohmann::json j = {{"a", format_rational(q.a)}, {"b", format_rational(q.b)}, {"c", format_rational(q.c)},
                      {"d", format_rational(q.d)}, {"e", format_rational(q.e)}, {"f", format_rational(q.f)},
                      {"g", format_rational(q.g)}};
  return j.dump();
}

}  // namespace

Rational cdrs_potential(const Space& space, const std::vector<Location>& s, const std::vector<Location>& a) {
  if (s.size() != a.size()) throw Error(ErrorCode::SizeMismatch, "server counts differ");
  Rational diversity = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) diversity += space.distance(s[i], s[j]);
  }
  return diversity + 2 * min_matching(space, s, a).cost;
}

PotentialBreakdown teia_potential(const Space& space, const std::vector<Location>& s,
                                  const std::vector<Location>& a, const std::vector<Rational>& E) {
  const std::size_t k = s.size();
  if (a.size() != k || E.size() != k) throw Error(ErrorCode::SizeMismatch, "server counts differ");
  PotentialBreakdown p;
  p.D = 0;
  Rational matching = 0;
  for (std::size_t i = 0; i < k; ++i) {
    matching += space.distance(a[i], s[i]);
    for (std::size_t j = i + 1; j < k; ++j) p.D += space.distance(s[i], s[j]);
  }
  p.M = Rational(static_cast<long>(k)) * matching;
  p.phi_cdrs = p.D + p.M;
  p.eps.assign(k, std::vector<Rational>(k));
  p.eps_total.assign(k, Rational(0));
  p.e.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      p.eps[i][j] = (space.distance(s[j], a[j]) + space.distance(s[j], s[i]) - space.distance(a[j], s[i])) / 2;
      p.eps_total[i] += p.eps[i][j];
    }
    p.e[i] = E[i] - p.eps_total[i];
    if (i == 0 || p.e[i] > p.e_max) p.e_max = p.e[i];
  }
  p.H = 0;
  for (std::size_t i = 0; i < k; ++i) p.H += 2 * (p.e_max - E[i]);
  p.phi = p.phi_cdrs + p.H;
  if (p.phi < 0) throw Error(ErrorCode::ContractViolation, "Teia potential is negative: " + format_rational(p.phi));
  return p;
}

std::vector<Location> align(const Space& space, const std::vector<Location>& s, const std::vector<Location>& a) {
  const Matching m = min_matching(space, s, a);
  std::vector<Location> out;
  out.reserve(a.size());
  for (auto j : m.assignment) out.push_back(a[j]);
  return out;
}

CheckReport check_handicap_update(const PotentialBreakdown& before, const PotentialBreakdown& after,
                                  std::size_t k, const Rational& cost_adv, const Rational& cost_alg) {
  CheckReport r;
  r.lhs = after.phi - before.phi - Rational(static_cast<long>(k)) * cost_adv + cost_alg;
  r.bound = 0;
  r.holds = r.lhs <= 0;
  return r;
}

Rational lazy_potential(const Rational& dxy, const Rational& dxz, const Rational& dyz) {
  if (dxy < 0 || dxz < 0 || dyz < 0) throw Error(ErrorCode::NegativeEntry, "negative distance");
  if (dxy > dxz + dyz || dxz > dxy + dyz || dyz > dxy + dxz) {
    throw Error(ErrorCode::TriangleViolation, "distances do not form a triangle");
  }
  const Rational sum = dxy + dxz + dyz;
  if (sum == 0) return 0;
  return 2 * dxy * (2 * dxz + dyz) / sum;
}

HarmonicChecks check_harmonic_updates(const FiniteMetric& m, PointId x, PointId y, PointId z, PointId r) {
  const Rational &dxy = m(x, y), &dxz = m(x, z), &dyz = m(y, z);
  const Rational &dxr = m(x, r), &dyr = m(y, r), &dzr = m(z, r);
  const Rational phi_xyz = lazy_potential(dxy, dxz, dyz);

  HarmonicChecks out;
  const Rational s = dxr + dzr;
  if (s == 0) {
    // Both servers already sit on r: the request is free and nothing moves.
    out.active.lhs = phi_xyz + 3 * dzr - lazy_potential(dxy, dxr, dyr);
  } else {
    out.active.lhs = phi_xyz + 3 * dzr - 2 * dxr * dzr / s - dxr / s * lazy_potential(dxy, dxr, dyr) -
                     dzr / s * lazy_potential(dyz, dzr, dyr);
  }
  out.cryptic.lhs = phi_xyz + 3 * dyr - lazy_potential(dxr, dxz, dzr);
  for (CheckReport* c : {&out.active, &out.cryptic}) {
    c->bound = 0;
    c->holds = c->lhs >= 0;
  }
  nlohmann::json w = {{"dxy", format_rational(dxy)}, {"dxz", format_rational(dxz)}, {"dyz", format_rational(dyz)},
                      {"dxr", format_rational(dxr)}, {"dyr", format_rational(dyr)}, {"dzr", format_rational(dzr)}};
  out.active.witness = out.cryptic.witness = w.dump();
  return out;
}

AppendixValues appendix_numerators(const QuadCoordinates& q) {
  const std::array<Rational, 7> vars{q.a, q.b, q.c, q.d, q.e, q.f, q.g};
  for (const auto& v : vars) {
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "split coordinates must be nonnegative");
  }
  if (q.e * q.f * q.g != 0) throw Error(ErrorCode::ProductNotZero, "efg must vanish: " + quad_witness(q));

  AppendixValues out;
  out.numerator1 = evaluate(kNumerator1, vars);
  out.numerator2 = evaluate(kNumerator2, vars);

  const auto& [a, b, c, d, e, f, g] = vars;
  const Rational den1 = (a + b + c + e + f + g) * (a + b + d + e + f + g) * (b + c + d + e + f + g) *
                        (a + c + 2 * d + e + 2 * f + g);
  const Rational den2 = (a + b + c + e + f + g) * (a + c + d + e + f + g);
  const HarmonicChecks checks = check_harmonic_updates(quad_metric(q), 0, 1, 2, 3);
  out.direct1 = den1 == 0 ? Rational(0) : checks.active.lhs * den1;
  out.direct2 = den2 == 0 ? Rational(0) : checks.cryptic.lhs * den2;
  return out;
}

RatioReport empirical_ratio(const Transcript& transcript, const OptResult& opt, const Rational& allowance) {
  const auto requests = transcript.requests();
  if (opt.path.size() != requests.size()) {
    throw Error(ErrorCode::SequenceMismatch, "optimum covers " + std::to_string(opt.path.size()) +
                                                 " requests, transcript has " + std::to_string(requests.size()));
  }
  RatioReport r;
  r.alg_cost = transcript.alg_total;
  r.opt_cost = opt.total;
  r.allowance = allowance;
  Rational adjusted = r.alg_cost - allowance;
  if (adjusted < 0) adjusted = 0;
  if (r.opt_cost == 0) {
    if (r.alg_cost == 0) r.ratio = Rational(1);
    if (adjusted == 0) r.adjusted_ratio = Rational(1);
  } else {
    r.ratio = r.alg_cost / r.opt_cost;
    r.adjusted_ratio = adjusted / r.opt_cost;
  }
  return r;
}

VerifyReport verify_teia(std::size_t k, std::size_t steps, std::uint64_t seed) {
  if (k == 0 || k > kMaxMatchingSize) throw Error(ErrorCode::InvalidArgument, "k must be between 1 and 8");
  constexpr std::size_t kStepsPerTrial = 500;
  VerifyReport report;
  auto fail = [&](std::uint64_t trial, std::size_t step, const std::string& what) {
    ++report.failures;
    if (report.first_witness.empty()) {
      report.first_witness = nlohmann::json{{"trial", trial}, {"step", step}, {"detail", what}}.dump();
    }
  };
  std::size_t done = 0;
  for (std::uint64_t trial = 0; done < steps; ++trial) {
    Rng rng = derive_rng(seed, trial, 4);
    const std::size_t n = k + 2 + uniform_below(rng, 4);
    auto space = Space::from_metric(std::make_shared<const FiniteMetric>(random_metric(n, rng)));
    const auto initial = initial_configuration(*space, k, seed, trial);
    LazyAdversary adversary(initial);
    const std::size_t count = std::min(kStepsPerTrial, steps - done);
    const Transcript t = run_simulation({AlgorithmKind::Handicap}, space, initial, adversary, count, seed, trial);

    std::vector<Location> s, a;
    for (auto p : initial) {
      s.push_back(space->location(p));
      a.push_back(space->location(p));
    }
    std::optional<PotentialBreakdown> before;
    try {
      before = teia_potential(*space, s, a, std::vector<Rational>(k));
    } catch (const Error& e) {
      fail(trial, 0, e.what());
    }
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const StepRecord& rec = t.steps[i];
      ++report.checked;
      std::vector<Location> adv;
      for (auto p : rec.adv_positions) adv.push_back(space->location(p));
      Rational tracked = 0;
      for (std::size_t j = 0; j < k; ++j) tracked += space->distance(rec.alg_positions[j], adv[j]);
      if (min_matching(*space, rec.alg_positions, adv).cost != tracked) {
        fail(trial, i, "adversary alignment is not a minimum matching");
      }
      try {
        PotentialBreakdown after = teia_potential(*space, rec.alg_positions, adv, rec.state.at("E"));
        if (before) {
          const CheckReport c = check_handicap_update(*before, after, k, rec.adv_cost, rec.alg_cost);
          if (!c.holds) fail(trial, i, "update condition lhs = " + format_rational(c.lhs));
        }
        before = std::move(after);
      } catch (const Error& e) {
        fail(trial, i, e.what());
        before.reset();
      }
    }
    done += t.steps.size();
    if (t.steps.empty()) break;
  }
  return report;
}

VerifyReport verify_harmonic(std::size_t trials, std::uint64_t seed) {
  VerifyReport report;
  Rng rng = derive_rng(seed, 0, 5);
  for (std::size_t i = 0; i < trials; ++i) {
    const QuadCoordinates q = random_quad_coordinates(rng);
    const HarmonicChecks c = check_harmonic_updates(quad_metric(q), 0, 1, 2, 3);
    ++report.checked;
    if (!c.active.holds || !c.cryptic.holds) {
      ++report.failures;
      if (report.first_witness.empty()) {
        report.first_witness = nlohmann::json{{"quad", nlohmann::json::parse(quad_witness(q))},
                                              {"active_lhs", format_rational(c.active.lhs)},
                                              {"cryptic_lhs", format_rational(c.cryptic.lhs)}}
                                   .dump();
      }
    }
  }
  return report;
}

VerifyReport verify_appendix(std::size_t trials, std::uint64_t seed) {
  VerifyReport report;
  Rng rng = derive_rng(seed, 0, 6);
  for (std::size_t i = 0; i < trials; ++i) {
    const QuadCoordinates q = random_quad_coordinates(rng);
    const AppendixValues v = appendix_numerators(q);
    ++report.checked;
    if (!v.matches() || v.numerator1 < 0 || v.numerator2 < 0) {
      ++report.failures;
      if (report.first_witness.empty()) {
        report.first_witness = nlohmann::json{{"quad", nlohmann::json::parse(quad_witness(q))},
                                              {"numerator1", format_rational(v.numerator1)},
                                              {"direct1", format_rational(v.direct1)},
                                              {"numerator2", format_rational(v.numerator2)},
                                              {"direct2", format_rational(v.direct2)}}
                                   .dump();
      }
    }
  }
  return report;
}

}  // namespace kserver
