#include "kserver/kserver.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for(ks_status s) {
  switch (s) {
    case KS_OK: return kExitOk;
    case KS_ERR_CHECK_FAILED: return kExitCheckFailed;
    case KS_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitError;
  }
}

void check(ks_status s, const std::string& context) {
  if (s != KS_OK) throw Failure{exit_for(s), context + ": " + ks_status_name(s) + ": " + ks_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { ks_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct MetricHandle {
  ks_metric* p = nullptr;
  ~MetricHandle() { ks_metric_free(p); }
};

struct TranscriptList {
  std::vector<ks_transcript*> items;
  TranscriptList() = default;
  TranscriptList(const TranscriptList&) = delete;
  TranscriptList& operator=(const TranscriptList&) = delete;
  ~TranscriptList() {
    for (auto* t : items) ks_transcript_free(t);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitError, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitError, "cannot write '" + path + "'"};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Failure{kExitError, "cannot write '" + path + "'"};
}

void load_metric(const std::string& path, MetricHandle& m) {
  check(ks_metric_load(path.c_str(), &m.p), "--metric " + path);
}

void load_transcripts(const std::string& path, TranscriptList& list) {
  const std::string text = read_file(path);
  ks_transcript** raw = nullptr;
  size_t count = 0;
  check(ks_transcripts_from_jsonl(text.c_str(), &raw, &count), path);
  list.items.assign(raw, raw + count);
  ks_transcripts_free(raw, 0);
}

struct Options {
  std::string metric;
  std::string out;
  std::string format = "json";
  std::string alg;
  std::string adversary = "lazy";
  std::string pool;
  std::string transcript;
  std::string verifier;
  std::size_t k = 2;
  std::size_t steps = 100;
  std::size_t trials = 1;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  bool random_slack_direct = false;
};

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (static_cast<unsigned char>(ch) < 0x20) continue;
    out += ch;
  }
  return out + "\"";
}

int run_metric_validate(const Options& o) {
  MetricHandle m;
  const ks_status s = ks_metric_load(o.metric.c_str(), &m.p);
  if (s == KS_ERR_METRIC) {
    const std::string error = ks_last_error();
    write_output(o.out, "{\"valid\":false,\"error\":" + json_string(error) + "}");
    std::cerr << "metric check failed: " << error << "\n";
    return kExitCheckFailed;
  }
  check(s, "--metric " + o.metric);
  CString report;
  check(ks_metric_report_json(m.p, &report.p), "metric-validate");
  std::string text = report.str();
  text.insert(1, "\"valid\":true,");
  write_output(o.out, text);
  return kExitOk;
}

int run_decompose(const Options& o) {
  MetricHandle m;
  load_metric(o.metric, m);
  CString out;
  check(ks_decompose_json(m.p, &out.p), "decompose");
  write_output(o.out, out.str());
  return kExitOk;
}

int run_tightspan(const Options& o) {
  MetricHandle m;
  load_metric(o.metric, m);
  CString out;
  check(ks_tightspan_json(m.p, &out.p), "tightspan");
  write_output(o.out, out.str());
  return kExitOk;
}

int run_simulate(const Options& o) {
  MetricHandle m;
  if (!o.metric.empty()) load_metric(o.metric, m);
  if (o.metric.empty() && o.pool.empty() && o.adversary.rfind("replay:", 0) != 0)
    throw Failure{kExitUsage, "--metric or --pool is required"};

  ks_sim_config c{};
  c.algorithm = o.alg.c_str();
  c.metric = m.p;
  c.pool = o.pool.empty() ? nullptr : o.pool.c_str();
  c.k = o.k;
  c.steps = o.steps;
  c.seed = o.seed;
  c.random_slack_direct = o.random_slack_direct ? 1 : 0;
  const std::size_t threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());

  TranscriptList results;
  if (o.adversary.rfind("replay:", 0) == 0) {
    TranscriptList sources;
    load_transcripts(o.adversary.substr(7), sources);
    c.adversary = "replay";
    for (auto* src : sources.items) {
      c.replay_source = src;
      ks_transcript* t = nullptr;
      check(ks_simulate(&c, 1, 1, &t), "simulate");
      results.items.push_back(t);
    }
  } else {
    c.adversary = o.adversary.c_str();
    results.items.assign(o.trials, nullptr);
    check(ks_simulate(&c, o.trials, threads, results.items.data()), "simulate");
  }

  std::string text;
  for (auto* t : results.items) {
    CString line;
    check(ks_transcript_to_jsonl(t, &line.p), "simulate");
    text += line.str();
  }
  write_output(o.out, text);
  if (!o.out.empty() && o.out != "-") {
    for (auto* t : results.items) {
      CString summary;
      check(ks_transcript_summary_json(t, &summary.p), "simulate");
      std::cerr << summary.str() << "\n";
    }
  }
  return kExitOk;
}

int run_ratio(const Options& o) {
  TranscriptList list;
  load_transcripts(o.transcript, list);
  if (list.items.empty()) throw Failure{kExitUsage, "--transcript: no transcripts in " + o.transcript};
  CString out;
  check(ks_ratio_report(list.items.data(), list.items.size(), o.format.c_str(), &out.p), "ratio");
  write_output(o.out, out.str());
  return kExitOk;
}

int run_verify(const Options& o, bool steps_given, bool trials_given) {
  std::size_t count = o.verifier == "teia" ? o.steps : o.trials;
  if (o.verifier == "teia" && !steps_given) count = 10000;
  if (o.verifier != "teia" && !trials_given) count = o.verifier == "harmonic" ? 100000 : 10000;
  CString out;
  const ks_status s = ks_verify_json(o.verifier.c_str(), o.k, count, o.seed, &out.p);
  if (s == KS_ERR_CHECK_FAILED) {
    write_output(o.out, out.str());
    std::cerr << ks_last_error() << "\n";
    return kExitCheckFailed;
  }
  check(s, "verify " + o.verifier);
  write_output(o.out, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-server algorithms, tight spans and potential-function verifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ks_version());
  Options o;

  const std::vector<std::string> algorithms{"dc",           "tree",     "sc",       "tightspan", "equipoise",
                                            "balance2",     "balanceslack", "handicap", "harmonic",  "randomslack"};
  auto adversary_check = CLI::Validator(
      [](std::string& v) -> std::string {
        if (v == "lazy" || v == "random") return {};
        if (v.rfind("replay:", 0) == 0 && v.size() > 7) return {};
        return "must be lazy, random or replay:FILE";
      },
      "lazy|random|replay:FILE");

  auto* validate = app.add_subcommand("metric-validate", "Check the metric axioms and the four point condition");
  validate->add_option("--metric", o.metric, "Metric file (.json or .csv)")->required();
  validate->add_option("--out", o.out, "Output path (default stdout)");

  auto* decompose = app.add_subcommand("decompose", "Split decomposition with isolation indices");
  decompose->add_option("--metric", o.metric, "Metric file (.json or .csv)")->required();
  decompose->add_option("--out", o.out, "Output path (default stdout)");

  auto* tightspan = app.add_subcommand("tightspan", "Vertices of the tight span");
  tightspan->add_option("--metric", o.metric, "Metric file (.json or .csv)")->required();
  tightspan->add_option("--out", o.out, "Output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Run an algorithm against an adversary and write JSONL transcripts");
  simulate->add_option("--alg", o.alg, "Algorithm")->required()->check(CLI::IsMember(algorithms));
  simulate->add_option("--adversary", o.adversary, "lazy | random | replay:FILE")->check(adversary_check);
  auto* metric_opt = simulate->add_option("--metric", o.metric, "Request pool as a metric file");
  simulate->add_option("--pool", o.pool, "Generated pool: line:N | tree:N | random:N | grid:N | plane:N")
      ->excludes(metric_opt);
  simulate->add_option("--k", o.k, "Number of servers")->check(CLI::PositiveNumber);
  simulate->add_option("--steps", o.steps, "Steps per trial");
  simulate->add_option("--trials", o.trials, "Independent trials")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", o.threads, "Worker threads (default: hardware concurrency)");
  simulate->add_option("--seed", o.seed, "Seed");
  simulate->add_option("--out", o.out, "Output path (default stdout)");
  simulate->add_flag("--randomslack-direct", o.random_slack_direct,
                     "RANDOM SLACK: serve with probability proportional to the server's own slack");

  auto* ratio = app.add_subcommand("ratio", "Offline optimum and competitive ratio of transcripts");
  ratio->add_option("transcript,--transcript", o.transcript, "Transcript JSONL file")->required();
  ratio->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  ratio->add_option("--out", o.out, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Exact randomized checks of the potential-function inequalities");
  verify->add_option("kind", o.verifier, "teia | harmonic | appendix")
      ->required()
      ->check(CLI::IsMember({"teia", "harmonic", "appendix"}));
  verify->add_option("--k", o.k, "Servers (teia)")->check(CLI::PositiveNumber);
  auto* steps_opt = verify->add_option("--steps", o.steps, "Steps (teia)");
  auto* trials_opt = verify->add_option("--trials", o.trials, "Trials (harmonic, appendix)");
  verify->add_option("--seed", o.seed, "Seed");
  verify->add_option("--out", o.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*validate) return run_metric_validate(o);
    if (*decompose) return run_decompose(o);
    if (*tightspan) return run_tightspan(o);
    if (*simulate) return run_simulate(o);
    if (*ratio) return run_ratio(o);
    if (*verify) return run_verify(o, steps_opt->count() > 0, trials_opt->count() > 0);
  } catch (const Failure& f) {
    std::cerr << (f.exit_code == kExitUsage ? "usage error: " : "error: ") << f.message << "\n";
    return f.exit_code;
  }
  return kExitUsage;
}
