#include "helpers.hpp"

#include "kserver/io.hpp"
#include "kserver/simulation.hpp"

#include <sstream>

using namespace kserver;
using namespace testutil;

TEST_CASE("metric JSON round-trip") {
  auto m = t345();
  auto j = metric_to_json(m);
  CHECK(j["dist"][0][1] == "3");
  CHECK(metric_from_json(j) == m);
  CHECK(metric_from_json(Json::parse(R"({"dist": [[0, "1/2"], ["1/2", 0]]})"))(0, 1) == R("1/2"));
  CHECK(error_of([] { metric_from_json(Json::parse(R"({"dist": [[0, 1.5], [1.5, 0]]})")); }) == ErrorCode::Parse);
  CHECK(error_of([] { metric_from_json(Json::parse(R"({"rows": []})")); }) == ErrorCode::Parse);
  CHECK(error_of([] { metric_from_json(Json::parse(R"({"dist": [[0, 1], [2, 0]]})")); }) == ErrorCode::Asymmetric);
}

TEST_CASE("metric CSV round-trip") {
  auto m = metric_from_csv("a,b,c\n0,1/2,1\n1/2,0,1\n1,1,0\n");
  CHECK(m.label(2) == "c");
  CHECK(m(0, 1) == R("1/2"));
  CHECK(metric_from_csv(metric_to_csv(m)) == m);
  CHECK(error_of([] { metric_from_csv("a,b\n0,1\n"); }) == ErrorCode::NotSquare);
  CHECK(error_of([] { metric_from_csv(""); }) == ErrorCode::Parse);
  CHECK(error_of([] { metric_from_csv("a,b\n0,x\nx,0\n"); }) == ErrorCode::Parse);
}

TEST_CASE("missing metric file") {
  CHECK(error_of([] { load_metric("/nonexistent/m.json"); }) == ErrorCode::Io);
}

TEST_CASE("decomposition and vertices JSON") {
  auto m = t345();
  auto j = decomposition_to_json(m, split_decomposition(m));
  REQUIRE(j["splits"].size() == 3);
  CHECK(j["splits"][0]["split"].size() == 2);
  CHECK(j["totally_decomposable"] == true);
  CHECK(j["residue"].size() == 3);
  auto v = vertices_to_json(tight_span_vertices(ptr(m)));
  CHECK(v.size() == 4);
  CHECK(v.dump().find(R"(["1","2","3"])") != std::string::npos);
}

TEST_CASE("spaces and locations round-trip") {
  for (const char* spec : {"line:6", "plane:5", "grid:2", "random:5"}) {
    auto space = make_pool(spec, 3);
    auto back = space_from_json(space_to_json(*space));
    CHECK(back->kind() == space->kind());
    CHECK(back->pool_size() == space->pool_size());
    for (PointId p = 0; p < space->pool_size(); ++p) {
      auto loc = space->location(p);
      CHECK(location_from_json(*back, location_to_json(loc)) == loc);
      CHECK(back->distance(0, p) == space->distance(0, p));
    }
  }
}

TEST_CASE("transcripts round-trip through JSON lines") {
  for (const char* spec : {"random:7", "line:9", "plane:6"}) {
    auto space = make_pool(spec, 5);
    auto init = initial_configuration(*space, 2, 5, 0);
    const AlgorithmKind kind = std::string(spec).starts_with("line")    ? AlgorithmKind::DoubleCoverage
                               : std::string(spec).starts_with("plane") ? AlgorithmKind::SlackCoverage
                                                                        : AlgorithmKind::RandomSlack;
    LazyAdversary adv(init);
    auto t = run_simulation({kind}, space, init, adv, 40, 5);
    const std::string text = transcript_to_jsonl(t);
    auto back = transcript_from_jsonl(text);
    CHECK(transcript_to_jsonl(back) == text);
    CHECK(back.requests() == t.requests());
    CHECK(back.alg_total == t.alg_total);
  }
}

TEST_CASE("several transcripts in one stream") {
  auto space = make_pool("random:6", 1);
  std::string text;
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    auto init = initial_configuration(*space, 2, 1, trial);
    RandomAdversary adv(init);
    text += transcript_to_jsonl(run_simulation({AlgorithmKind::Handicap}, space, init, adv, 10, 1, trial));
  }
  auto all = transcripts_from_jsonl(text);
  REQUIRE(all.size() == 3);
  CHECK(all[2].trial == 2);
  CHECK(error_of([&] { transcript_from_jsonl(text); }) == ErrorCode::Parse);
}

TEST_CASE("corrupted transcripts are rejected") {
  auto space = make_pool("random:6", 1);
  auto init = initial_configuration(*space, 2, 1, 0);
  RandomAdversary adv(init);
  const std::string text = transcript_to_jsonl(run_simulation({AlgorithmKind::Handicap}, space, init, adv, 5, 1));
  CHECK(error_of([&] { transcripts_from_jsonl("{not json\n"); }) == ErrorCode::Parse);
  auto lines = text.substr(text.find('\n') + 1);
  CHECK(error_of([&] { transcripts_from_jsonl(lines); }) == ErrorCode::Parse);
  auto pos = text.rfind("\"alg_total\"");
  REQUIRE(pos != std::string::npos);
  auto tampered = text;
  tampered.insert(text.find('"', pos + 12) + 1, "99");
  CHECK(error_of([&] { transcripts_from_jsonl(tampered); }) == ErrorCode::Parse);
}
