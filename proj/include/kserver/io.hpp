#pragma once

// Text formats: metrics (JSON and CSV), transcripts (JSON lines), reports (JSON).
// Rationals are written as "p/q" strings in lowest terms.

#include "kserver/analysis.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace kserver {

using Json = nlohmann::json;

/// { "labels": [...], "dist": [["p/q", ...], ...] }. Entries may also be JSON integers.
FiniteMetric metric_from_json(const Json& j);
Json metric_to_json(const FiniteMetric& m);

/// First row holds the labels, then one row of rationals per point.
FiniteMetric metric_from_csv(const std::string& text);
std::string metric_to_csv(const FiniteMetric& m);

/// Picks CSV for a ".csv" extension and JSON otherwise. Throws Io or Parse.
FiniteMetric load_metric(const std::string& path);

Json space_to_json(const Space& space);
SpacePtr space_from_json(const Json& j);

Json location_to_json(const Location& loc);
Location location_from_json(const Space& space, const Json& j);

Json decision_to_json(const Decision& d);
Decision decision_from_json(const Json& j);

Json decomposition_to_json(const FiniteMetric& m, const SplitDecomposition& dec);
Json vertices_to_json(const std::vector<CoordinateVector>& vertices);
Json ratio_to_json(const RatioReport& r);
Json verify_to_json(const VerifyReport& r);
Json breakdown_to_json(const PotentialBreakdown& p);

/// Header line, one line per step, then a totals line.
void write_transcript(std::ostream& out, const Transcript& t);
std::string transcript_to_jsonl(const Transcript& t);
/// Throws Parse on malformed input, and when the totals line disagrees with the steps.
/// A stream may hold several transcripts back to back; each starts with its header line.
std::vector<Transcript> read_transcripts(std::istream& in);
std::vector<Transcript> transcripts_from_jsonl(const std::string& text);
/// Exactly one transcript, else Parse.
Transcript transcript_from_jsonl(const std::string& text);

}  // namespace kserver
