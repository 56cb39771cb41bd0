/* C interface to the k-server library. All functions are thread-safe with respect to
 * distinct handles. Strings returned through `char**` are owned by the caller and must be
 * released with ks_string_free. On failure a function returns a nonzero ks_status and
 * ks_last_error() describes the problem for the calling thread. */
#ifndef KSERVER_KSERVER_H
#define KSERVER_KSERVER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KS_API __declspec(dllexport)
#else
#define KS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ks_status {
  KS_OK = 0,
  KS_ERR_INVALID_ARGUMENT = 1,
  KS_ERR_PARSE = 2,
  KS_ERR_METRIC = 3,          /* metric axioms violated */
  KS_ERR_TOO_MANY_POINTS = 4,
  KS_ERR_INCOMPATIBLE = 5,    /* algorithm cannot run on this space */
  KS_ERR_IO = 6,
  KS_ERR_INTERNAL = 7,
  KS_ERR_CHECK_FAILED = 8     /* a verifier found a counterexample; the report is still returned */
} ks_status;

typedef struct ks_metric ks_metric;
typedef struct ks_transcript ks_transcript;

KS_API const char* ks_version(void);
KS_API const char* ks_last_error(void);
KS_API const char* ks_status_name(ks_status status);
KS_API void ks_string_free(char* s);

/* Metrics. */
KS_API ks_status ks_metric_from_json(const char* json, ks_metric** out);
KS_API ks_status ks_metric_from_csv(const char* csv, ks_metric** out);
KS_API ks_status ks_metric_load(const char* path, ks_metric** out);
KS_API void ks_metric_free(ks_metric* m);
KS_API size_t ks_metric_size(const ks_metric* m);
KS_API int ks_metric_is_proper(const ks_metric* m);
KS_API ks_status ks_metric_to_json(const ks_metric* m, char** out);
KS_API ks_status ks_metric_to_csv(const ks_metric* m, char** out);
/* {"points", "proper", "four_point", "four_point_witness"} */
KS_API ks_status ks_metric_report_json(const ks_metric* m, char** out);

/* T-theory. */
KS_API ks_status ks_decompose_json(const ks_metric* m, char** out);
KS_API ks_status ks_tightspan_json(const ks_metric* m, char** out);

/* Simulation. */
typedef struct ks_sim_config {
  const char* algorithm;              /* dc | tree | sc | tightspan | equipoise | balance2 |
                                         balanceslack | handicap | harmonic | randomslack */
  const char* adversary;              /* lazy | random | replay */
  const ks_transcript* replay_source; /* moves to re-issue when adversary is "replay" */
  const ks_metric* metric;            /* request pool; NULL to build one from `pool` */
  const char* pool;                   /* line:N | tree:N | random:N | grid:N | plane:N */
  size_t k;
  size_t steps;
  uint64_t seed;
  int random_slack_direct;            /* nonzero: P(s1 serves) proportional to eps1 */
} ks_sim_config;

/* Runs `trials` independent simulations (trial indices 0..trials-1) on up to `threads`
 * worker threads and stores them in out[0..trials-1] in trial order. */
KS_API ks_status ks_simulate(const ks_sim_config* config, size_t trials, size_t threads, ks_transcript** out);
KS_API void ks_transcript_free(ks_transcript* t);
KS_API ks_status ks_transcript_to_jsonl(const ks_transcript* t, char** out);
/* Parses every transcript in `text`. *out receives a malloc'd array of *count handles;
 * free each handle and then the array with ks_transcripts_free. */
KS_API ks_status ks_transcripts_from_jsonl(const char* text, ks_transcript*** out, size_t* count);
KS_API void ks_transcripts_free(ks_transcript** list, size_t count);
/* {"algorithm", "adversary", "seed", "trial", "k", "steps", "alg_total", "adv_total"} */
KS_API ks_status ks_transcript_summary_json(const ks_transcript* t, char** out);

/* Offline optimum and competitive ratio of one transcript. The additive allowance is the
 * CDRS potential of the initial configuration. */
KS_API ks_status ks_ratio_json(const ks_transcript* t, char** out);
/* One row per transcript. format "json": an object for a single transcript, else an array;
 * format "csv": header line plus one line per transcript. */
KS_API ks_status ks_ratio_report(const ks_transcript* const* list, size_t count, const char* format, char** out);

/* kind: "teia" (uses k and count = steps), "harmonic" or "appendix" (count = trials).
 * Writes {"checked", "failures", "first_witness"}; returns KS_ERR_CHECK_FAILED if failures > 0. */
KS_API ks_status ks_verify_json(const char* kind, size_t k, size_t count, uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif /* KSERVER_KSERVER_H */
