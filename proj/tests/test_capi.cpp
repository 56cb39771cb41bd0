#include "kserver/kserver.h"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

namespace {

const char* kT345 = R"({"labels": ["x", "y", "z"], "dist": [[0, 3, 4], [3, 0, 5], [4, 5, 0]]})";

std::string take(char* s) {
  std::string out = s ? s : "";
  ks_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("metric handles") {
  ks_metric* m = nullptr;
  REQUIRE(ks_metric_from_json(kT345, &m) == KS_OK);
  CHECK(ks_metric_size(m) == 3);
  CHECK(ks_metric_is_proper(m) == 1);
  char* out = nullptr;
  REQUIRE(ks_metric_to_csv(m, &out) == KS_OK);
  const std::string csv = take(out);
  CHECK(csv.rfind("x,y,z\n", 0) == 0);

  ks_metric* back = nullptr;
  REQUIRE(ks_metric_from_csv(csv.c_str(), &back) == KS_OK);
  REQUIRE(ks_metric_to_json(back, &out) == KS_OK);
  CHECK(take(out).find("\"5\"") != std::string::npos);
  REQUIRE(ks_metric_report_json(m, &out) == KS_OK);
  CHECK(take(out).find("\"four_point\":true") != std::string::npos);
  ks_metric_free(back);
  ks_metric_free(m);
}

TEST_CASE("metric errors map to status codes") {
  ks_metric* m = nullptr;
  CHECK(ks_metric_from_json(R"({"dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]})", &m) == KS_ERR_METRIC);
  CHECK(std::string(ks_last_error()).find("witness: 0 2 1") != std::string::npos);
  CHECK(ks_metric_from_json("{oops", &m) == KS_ERR_PARSE);
  CHECK(ks_metric_load("/nonexistent.json", &m) == KS_ERR_IO);
  CHECK(ks_metric_from_json(nullptr, &m) == KS_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::string(ks_status_name(KS_ERR_CHECK_FAILED)) == "check failed");
}

TEST_CASE("tight span and decomposition through the C API") {
  ks_metric* m = nullptr;
  REQUIRE(ks_metric_from_json(kT345, &m) == KS_OK);
  char* out = nullptr;
  REQUIRE(ks_tightspan_json(m, &out) == KS_OK);
  CHECK(take(out) == R"([["0","3","4"],["1","2","3"],["3","0","5"],["4","5","0"]])");
  REQUIRE(ks_decompose_json(m, &out) == KS_OK);
  CHECK(take(out).find("\"totally_decomposable\":true") != std::string::npos);
  ks_metric_free(m);
}

TEST_CASE("simulate, serialize, reparse and ratio") {
  ks_sim_config c{};
  c.algorithm = "handicap";
  c.adversary = "lazy";
  c.pool = "random:7";
  c.k = 3;
  c.steps = 30;
  c.seed = 1;
  std::vector<ks_transcript*> ts(4, nullptr);
  REQUIRE(ks_simulate(&c, 4, 3, ts.data()) == KS_OK);
  std::string all;
  for (auto* t : ts) {
    char* out = nullptr;
    REQUIRE(ks_transcript_to_jsonl(t, &out) == KS_OK);
    all += take(out);
  }
  ks_transcript* single = nullptr;
  REQUIRE(ks_simulate(&c, 1, 1, &single) == KS_OK);
  char* out = nullptr;
  REQUIRE(ks_transcript_to_jsonl(single, &out) == KS_OK);
  CHECK(all.rfind(take(out), 0) == 0);

  ks_transcript** parsed = nullptr;
  size_t count = 0;
  REQUIRE(ks_transcripts_from_jsonl(all.c_str(), &parsed, &count) == KS_OK);
  CHECK(count == 4);
  REQUIRE(ks_ratio_report(parsed, count, "csv", &out) == KS_OK);
  const std::string csv = take(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  REQUIRE(ks_ratio_json(parsed[0], &out) == KS_OK);
  CHECK(take(out).find("\"opt_cost\"") != std::string::npos);
  REQUIRE(ks_transcript_summary_json(parsed[3], &out) == KS_OK);
  CHECK(take(out).find("\"trial\":3") != std::string::npos);

  ks_sim_config r{};
  r.algorithm = "balance2";
  r.adversary = "replay";
  r.replay_source = parsed[1];
  ks_transcript* replayed = nullptr;
  REQUIRE(ks_simulate(&r, 1, 1, &replayed) == KS_OK);
  REQUIRE(ks_transcript_summary_json(replayed, &out) == KS_OK);
  CHECK(take(out).find("\"adversary\":\"replay\"") != std::string::npos);

  ks_transcript_free(replayed);
  ks_transcripts_free(parsed, count);
  ks_transcript_free(single);
  for (auto* t : ts) ks_transcript_free(t);
}

TEST_CASE("simulation errors") {
  ks_sim_config c{};
  c.algorithm = "dc";
  c.adversary = "lazy";
  c.pool = "random:5";
  c.k = 2;
  c.steps = 5;
  ks_transcript* t = nullptr;
  CHECK(ks_simulate(&c, 1, 1, &t) == KS_ERR_INCOMPATIBLE);
  c.algorithm = "nope";
  CHECK(ks_simulate(&c, 1, 1, &t) == KS_ERR_INVALID_ARGUMENT);
  c.algorithm = "tree";
  c.adversary = "hostile";
  CHECK(ks_simulate(&c, 1, 1, &t) == KS_ERR_INVALID_ARGUMENT);
  c.adversary = "lazy";
  c.pool = nullptr;
  CHECK(ks_simulate(&c, 1, 1, &t) == KS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verifiers through the C API") {
  char* out = nullptr;
  REQUIRE(ks_verify_json("harmonic", 2, 200, 7, &out) == KS_OK);
  CHECK(take(out) == R"({"checked":200,"failures":0,"first_witness":null})");
  REQUIRE(ks_verify_json("appendix", 2, 50, 7, &out) == KS_OK);
  take(out);
  REQUIRE(ks_verify_json("teia", 2, 200, 7, &out) == KS_OK);
  take(out);
  CHECK(ks_verify_json("bogus", 2, 1, 7, &out) == KS_ERR_INVALID_ARGUMENT);
}
