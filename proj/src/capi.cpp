#include "kserver/kserver.h"

#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>

struct ks_metric {
  kserver::MetricPtr metric;
};

struct ks_transcript {
  kserver::Transcript transcript;
};

namespace {

using namespace kserver;

thread_local std::string g_last_error;

ks_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare:
    case ErrorCode::Asymmetric:
    case ErrorCode::NegativeEntry:
    case ErrorCode::NonzeroDiagonal:
    case ErrorCode::TriangleViolation:
      return KS_ERR_METRIC;
    case ErrorCode::TooManyPoints:
      return KS_ERR_TOO_MANY_POINTS;
    case ErrorCode::IncompatibleAlgorithmMetric:
    case ErrorCode::NotATreeMetric:
      return KS_ERR_INCOMPATIBLE;
    case ErrorCode::Parse:
      return KS_ERR_PARSE;
    case ErrorCode::Io:
      return KS_ERR_IO;
    case ErrorCode::ContractViolation:
    case ErrorCode::ReconstructionFailure:
    case ErrorCode::TooManyOpenServers:
    case ErrorCode::Internal:
      return KS_ERR_INTERNAL;
    default:
      return KS_ERR_INVALID_ARGUMENT;
  }
}

std::string with_witness(const Error& e) {
  std::string msg = e.what();
  if (!e.witness().empty()) {
    msg += " [witness:";
    for (auto w : e.witness()) msg += " " + std::to_string(w);
    msg += "]";
  }
  return msg;
}

template <typename F>
ks_status guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    g_last_error = with_witness(e);
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("Internal: ") + e.what();
    return KS_ERR_INTERNAL;
  }
}

ks_status invalid(const char* what) {
  g_last_error = std::string("InvalidArgument: ") + what;
  return KS_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ks_status emit(const std::string& s, char** out) {
  *out = dup_string(s);
  return KS_OK;
}

ks_status new_metric(FiniteMetric m, ks_metric** out) {
  *out = new ks_metric{std::make_shared<const FiniteMetric>(std::move(m))};
  return KS_OK;
}

Transcript simulate_one(const ks_sim_config& c, const SpacePtr& space, std::uint64_t trial) {
  AlgorithmConfig alg{parse_algorithm(c.algorithm),
                      c.random_slack_direct ? RandomSlackRule::Direct : RandomSlackRule::Inverse};
  const std::string adversary = c.adversary ? c.adversary : "lazy";
  if (adversary == "replay") {
    if (!c.replay_source) throw Error(ErrorCode::InvalidArgument, "replay needs a source transcript");
    return replay(c.replay_source->transcript, alg);
  }
  const auto initial = initial_configuration(*space, c.k, c.seed, trial);
  if (adversary == "lazy") {
    LazyAdversary a(initial);
    return run_simulation(alg, space, initial, a, c.steps, c.seed, trial);
  }
  if (adversary == "random") {
    RandomAdversary a(initial);
    return run_simulation(alg, space, initial, a, c.steps, c.seed, trial);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown adversary '" + adversary + "'");
}

}  // namespace

extern "C" {

const char* ks_version(void) { return "1.0.0"; }

const char* ks_last_error(void) { return g_last_error.c_str(); }

const char* ks_status_name(ks_status status) {
  switch (status) {
    case KS_OK: return "ok";
    case KS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KS_ERR_PARSE: return "parse error";
    case KS_ERR_METRIC: return "invalid metric";
    case KS_ERR_TOO_MANY_POINTS: return "too many points";
    case KS_ERR_INCOMPATIBLE: return "incompatible algorithm and metric";
    case KS_ERR_IO: return "i/o error";
    case KS_ERR_INTERNAL: return "internal error";
    case KS_ERR_CHECK_FAILED: return "check failed";
  }
  return "unknown";
}

void ks_string_free(char* s) { std::free(s); }

ks_status ks_metric_from_json(const char* json, ks_metric** out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] {
    Json j;
    try {
      j = Json::parse(json);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::Parse, e.what());
    }
    return new_metric(metric_from_json(j), out);
  });
}

ks_status ks_metric_from_csv(const char* csv, ks_metric** out) {
  if (!csv || !out) return invalid("null argument");
  return guarded([&] { return new_metric(metric_from_csv(csv), out); });
}

ks_status ks_metric_load(const char* path, ks_metric** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { return new_metric(load_metric(path), out); });
}

void ks_metric_free(ks_metric* m) { delete m; }

size_t ks_metric_size(const ks_metric* m) { return m ? m->metric->size() : 0; }

int ks_metric_is_proper(const ks_metric* m) { return m && m->metric->is_proper() ? 1 : 0; }

ks_status ks_metric_to_json(const ks_metric* m, char** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { return emit(metric_to_json(*m->metric).dump(), out); });
}

ks_status ks_metric_to_csv(const ks_metric* m, char** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { return emit(metric_to_csv(*m->metric), out); });
}

ks_status ks_metric_report_json(const ks_metric* m, char** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] {
    const auto fp = four_point_condition(*m->metric);
    Json witness = nullptr;
    if (fp.witness) {
      witness = Json::array();
      for (auto p : *fp.witness) witness.push_back(m->metric->label(p));
    }
    Json j = {{"points", m->metric->size()},
              {"proper", m->metric->is_proper()},
              {"four_point", fp.holds},
              {"four_point_witness", witness}};
    return emit(j.dump(), out);
  });
}

ks_status ks_decompose_json(const ks_metric* m, char** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { return emit(decomposition_to_json(*m->metric, split_decomposition(*m->metric)).dump(), out); });
}

ks_status ks_tightspan_json(const ks_metric* m, char** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { return emit(vertices_to_json(tight_span_vertices(m->metric)).dump(), out); });
}

ks_status ks_simulate(const ks_sim_config* config, size_t trials, size_t threads, ks_transcript** out) {
  if (!config || !out || !config->algorithm) return invalid("null argument");
  if (trials == 0) return invalid("trials must be positive");
  return guarded([&] {
    const ks_sim_config& c = *config;
    const bool replaying = c.adversary && std::string(c.adversary) == "replay";
    SpacePtr space;
    if (!replaying) {
      if (c.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
      if (c.metric) {
        space = Space::from_metric(c.metric->metric);
      } else if (c.pool) {
        space = make_pool(c.pool, c.seed);
      } else {
        throw Error(ErrorCode::InvalidArgument, "either a metric or a pool spec is required");
      }
    }
    std::vector<std::optional<Transcript>> results(trials);
    std::vector<std::string> errors(trials);
    std::vector<std::optional<ErrorCode>> codes(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < trials; i = next++) {
        try {
          results[i] = simulate_one(c, space, i);
        } catch (const Error& e) {
          codes[i] = e.code();
          errors[i] = with_witness(e);
        } catch (const std::exception& e) {
          codes[i] = ErrorCode::Internal;
          errors[i] = e.what();
        }
      }
    };
    const std::size_t n = std::clamp<std::size_t>(threads, 1, trials);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < trials; ++i) {
      if (codes[i]) throw Error(*codes[i], "trial " + std::to_string(i) + ": " + errors[i]);
    }
    for (std::size_t i = 0; i < trials; ++i) out[i] = new ks_transcript{std::move(*results[i])};
    return KS_OK;
  });
}

void ks_transcript_free(ks_transcript* t) { delete t; }

ks_status ks_transcript_to_jsonl(const ks_transcript* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] { return emit(transcript_to_jsonl(t->transcript), out); });
}

ks_status ks_transcripts_from_jsonl(const char* text, ks_transcript*** out, size_t* count) {
  if (!text || !out || !count) return invalid("null argument");
  return guarded([&] {
    auto all = transcripts_from_jsonl(text);
    auto** list = static_cast<ks_transcript**>(std::calloc(all.size() + 1, sizeof(ks_transcript*)));
    if (!list) throw std::bad_alloc();
    for (std::size_t i = 0; i < all.size(); ++i) list[i] = new ks_transcript{std::move(all[i])};
    *out = list;
    *count = all.size();
    return KS_OK;
  });
}

void ks_transcripts_free(ks_transcript** list, size_t count) {
  if (!list) return;
  for (size_t i = 0; i < count; ++i) delete list[i];
  std::free(list);
}

ks_status ks_transcript_summary_json(const ks_transcript* t, char** out) {
  if (!t || !out) return invalid("null argument");
  return guarded([&] {
    const Transcript& tr = t->transcript;
    Json j = {{"algorithm", tr.algorithm},
              {"adversary", tr.adversary},
              {"seed", tr.seed},
              {"trial", tr.trial},
              {"k", tr.k()},
              {"steps", tr.steps.size()},
              {"alg_total", format_rational(tr.alg_total)},
              {"adv_total", format_rational(tr.adv_total)}};
    return emit(j.dump(), out);
  });
}

ks_status ks_ratio_json(const ks_transcript* t, char** out) {
  if (!t) return invalid("null argument");
  return ks_ratio_report(&t, 1, "json", out);
}

ks_status ks_ratio_report(const ks_transcript* const* list, size_t count, const char* format, char** out) {
  if (!list || !out || count == 0) return invalid("null argument");
  const std::string fmt = format ? format : "json";
  if (fmt != "json" && fmt != "csv") return invalid("format must be json or csv");
  return guarded([&] {
    std::vector<Json> rows;
    for (size_t i = 0; i < count; ++i) {
      if (!list[i]) throw Error(ErrorCode::InvalidArgument, "null transcript");
      const Transcript& tr = list[i]->transcript;
      const OptResult opt = opt_cost(*tr.space, tr.initial, tr.requests());
      std::vector<Location> start;
      for (auto p : tr.initial) start.push_back(tr.space->location(p));
      const Rational allowance = cdrs_potential(*tr.space, start, start);
      Json j = ratio_to_json(empirical_ratio(tr, opt, allowance));
      j["algorithm"] = tr.algorithm;
      j["adversary"] = tr.adversary;
      j["seed"] = tr.seed;
      j["trial"] = tr.trial;
      rows.push_back(std::move(j));
    }
    if (fmt == "json") return emit(count == 1 ? rows.front().dump() : Json(rows).dump(), out);
    auto cell = [](const Json& v) { return v.is_null() ? std::string() : v.is_string() ? v.get<std::string>() : v.dump(); };
    std::string csv = "algorithm,adversary,seed,trial,alg_cost,opt_cost,allowance,ratio,adjusted_ratio\n";
    for (const auto& r : rows) {
      csv += cell(r["algorithm"]) + "," + cell(r["adversary"]) + "," + cell(r["seed"]) + "," + cell(r["trial"]) + "," +
             cell(r["alg_cost"]) + "," + cell(r["opt_cost"]) + "," + cell(r["allowance"]) + "," + cell(r["ratio"]) +
             "," + cell(r["adjusted_ratio"]) + "\n";
    }
    return emit(csv, out);
  });
}

ks_status ks_verify_json(const char* kind, size_t k, size_t count, uint64_t seed, char** out) {
  if (!kind || !out) return invalid("null argument");
  return guarded([&] {
    const std::string which = kind;
    VerifyReport r;
    if (which == "teia") {
      r = verify_teia(k, count, seed);
    } else if (which == "harmonic") {
      r = verify_harmonic(count, seed);
    } else if (which == "appendix") {
      r = verify_appendix(count, seed);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown verifier '" + which + "'");
    }
    *out = dup_string(verify_to_json(r).dump());
    if (r.failures > 0) {
      g_last_error = "check failed: " + r.first_witness;
      return KS_ERR_CHECK_FAILED;
    }
    return KS_OK;
  });
}

}  // extern "C"
