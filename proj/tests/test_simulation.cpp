#include "helpers.hpp"

#include "kserver/io.hpp"
#include "kserver/optimal.hpp"
#include "kserver/simulation.hpp"

#include <algorithm>

using namespace kserver;
using namespace testutil;

namespace {

std::size_t open_servers(const Space& space, const std::vector<Location>& alg, const std::vector<PointId>& adv) {
  std::vector<Location> a;
  for (auto p : adv) a.push_back(space.location(p));
  std::size_t open = 0;
  auto m = min_matching(space, alg, a);
  for (std::size_t i = 0; i < alg.size(); ++i) open += !space.same_place(alg[i], a[m.assignment[i]]);
  return open;
}

}  // namespace

TEST_CASE("lazy adversary step") {
  auto space = Space::from_metric(ptr(t345()));
  Rng rng(1);
  std::vector<Location> alg{PointId(0), PointId(1)};
  auto move = lazy_adversary_step(*space, alg, {0, 1}, rng);
  CHECK(move.kind == AdversaryMove::Kind::CrypticMove);
  CHECK(move.point == 2);

  move = lazy_adversary_step(*space, alg, {2, 1}, rng);
  CHECK(move.kind == AdversaryMove::Kind::LazyRequest);
  CHECK(move.point == 2);
  CHECK(move.server == 0);

  CHECK(error_of([&] { lazy_adversary_step(*space, alg, {2, 2}, rng); }) == ErrorCode::TooManyOpenServers);
  std::vector<Location> full{PointId(0), PointId(1), PointId(2)};
  CHECK(error_of([&] { lazy_adversary_step(*space, full, {0, 1, 2}, rng); }) == ErrorCode::EmptyPool);
}

TEST_CASE("lazy adversary keeps at most one open server and alternates cryptic and lazy") {
  for (auto kind : {AlgorithmKind::Handicap, AlgorithmKind::Harmonic, AlgorithmKind::Balance2,
                    AlgorithmKind::Equipoise}) {
    Rng rng(51);
    auto space = Space::from_metric(ptr(random_metric(7, rng)));
    auto init = initial_configuration(*space, 3, 9, 0);
    LazyAdversary adv(init);
    auto alg = make_algorithm({kind}, space, init);
    std::optional<AdversaryMove::Kind> prev;
    for (int step = 0; step < 200; ++step) {
      auto move = adv.next(*space, alg->positions(), rng);
      CHECK(open_servers(*space, alg->positions(), adv.positions()) <= 1);
      if (prev == AdversaryMove::Kind::CrypticMove) CHECK(move.kind == AdversaryMove::Kind::LazyRequest);
      if (move.has_request()) {
        CHECK(move.kind == AdversaryMove::Kind::LazyRequest);
        auto d = alg->serve(move.point, rng);
        adv.after_serve(*space, alg->positions(), d.chosen);
        CHECK(open_servers(*space, alg->positions(), adv.positions()) <= 1);
      }
      prev = move.kind;
    }
  }
}

TEST_CASE("random adversary serves with its nearest server") {
  auto space = Space::line(rats({0, 10, 3}));
  RandomAdversary adv({0, 1});
  Rng rng(3);
  std::vector<Location> alg{Rational(0), Rational(10)};
  for (int i = 0; i < 20; ++i) {
    auto before = adv.positions();
    auto move = adv.next(*space, alg, rng);
    CHECK(move.kind == AdversaryMove::Kind::ActiveRequest);
    CHECK(adv.positions()[move.server] == move.point);
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(space->distance(before[move.server], move.point) <= space->distance(before[j], move.point));
  }
}

TEST_CASE("empty simulation") {
  auto space = Space::from_metric(ptr(t345()));
  LazyAdversary adv({0, 1});
  auto t = run_simulation({AlgorithmKind::Handicap}, space, {0, 1}, adv, 0, 1);
  CHECK(t.steps.empty());
  CHECK(t.alg_total == 0);
  CHECK(t.adv_total == 0);
}

TEST_CASE("double coverage against a replayed request") {
  auto space = Space::line(rats({0, 10, 3}));
  ReplayAdversary adv({0, 1}, {{AdversaryMove::Kind::ActiveRequest, 2, 0}});
  auto t = run_simulation({AlgorithmKind::DoubleCoverage}, space, {0, 1}, adv, 10, 1);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.alg_total == 6);
  CHECK(t.adv_total == 3);
  CHECK(t.steps[0].alg_positions == std::vector<Location>{Rational(3), Rational(7)});
}

TEST_CASE("simulations are deterministic and totals add up") {
  auto space = make_pool("random:8", 4);
  for (auto kind : {AlgorithmKind::Handicap, AlgorithmKind::Harmonic, AlgorithmKind::TightSpan,
                    AlgorithmKind::RandomSlack}) {
    auto init = initial_configuration(*space, 2, 4, 1);
    LazyAdversary a1(init), a2(init);
    auto t1 = run_simulation({kind}, space, init, a1, 80, 4, 1);
    auto t2 = run_simulation({kind}, space, init, a2, 80, 4, 1);
    CHECK(transcript_to_jsonl(t1) == transcript_to_jsonl(t2));
    Rational alg = 0, adv = 0;
    for (const auto& s : t1.steps) {
      alg += s.alg_cost;
      adv += s.adv_cost;
      if (s.decision) CHECK(s.alg_positions[s.decision->chosen] == space->location(s.move.point));
    }
    CHECK(alg == t1.alg_total);
    CHECK(adv == t1.adv_total);
  }
}

TEST_CASE("different trials get different streams") {
  auto space = make_pool("random:8", 4);
  CHECK(derive_rng(1, 0, 0)() != derive_rng(1, 1, 0)());
  CHECK(derive_rng(1, 0, 0)() != derive_rng(1, 0, 1)());
  CHECK(derive_rng(1, 0, 0)() == derive_rng(1, 0, 0)());
  auto init = initial_configuration(*space, 3, 1, 0);
  std::sort(init.begin(), init.end());
  CHECK(std::adjacent_find(init.begin(), init.end()) == init.end());
  CHECK(error_of([&] { initial_configuration(*space, 9, 1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("replay reproduces decisions") {
  auto space = make_pool("random:7", 2);
  auto init = initial_configuration(*space, 3, 2, 0);
  RandomAdversary adv(init);
  auto t = run_simulation({AlgorithmKind::Harmonic}, space, init, adv, 60, 2);
  auto again = replay(t, {AlgorithmKind::Harmonic});
  CHECK(again.adversary == "replay");
  REQUIRE(again.steps.size() == t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CHECK(again.steps[i].move == t.steps[i].move);
    CHECK(again.steps[i].decision->chosen == t.steps[i].decision->chosen);
    CHECK(again.steps[i].alg_positions == t.steps[i].alg_positions);
  }
  CHECK(again.alg_total == t.alg_total);
  CHECK(again.adv_total == t.adv_total);
}

TEST_CASE("handicap transcript replayed through balance slack") {
  auto space = make_pool("random:6", 3);
  auto init = initial_configuration(*space, 2, 3, 0);
  LazyAdversary adv(init);
  auto t = run_simulation({AlgorithmKind::Handicap}, space, init, adv, 300, 3);
  auto b = replay(t, {AlgorithmKind::BalanceSlack});
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CHECK(b.steps[i].move == t.steps[i].move);
    if (t.steps[i].decision) CHECK(b.steps[i].decision->chosen == t.steps[i].decision->chosen);
  }
  CHECK(opt_cost(*space, init, t.requests()).total <= t.alg_total);
}

TEST_CASE("every pool kind runs its natural algorithm") {
  struct Case {
    const char* pool;
    AlgorithmKind kind;
  };
  for (auto c : {Case{"line:12", AlgorithmKind::DoubleCoverage}, Case{"plane:10", AlgorithmKind::SlackCoverage},
                 Case{"tree:9", AlgorithmKind::Tree}, Case{"grid:3", AlgorithmKind::Equipoise},
                 Case{"random:8", AlgorithmKind::Balance2}}) {
    auto space = make_pool(c.pool, 1);
    auto init = initial_configuration(*space, 2, 1, 0);
    RandomAdversary adv(init);
    auto t = run_simulation({c.kind}, space, init, adv, 50, 1);
    CHECK(t.steps.size() == 50);
    CHECK(t.alg_total >= 0);
  }
  CHECK(error_of([] { make_pool("torus:4", 1); }) == ErrorCode::InvalidArgument);
}
