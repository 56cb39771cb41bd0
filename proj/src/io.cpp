#include "kserver/io.hpp"

#include "kserver/error.hpp"

#include <fstream>
#include <sstream>

namespace kserver {

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw Error(ErrorCode::Parse, "expected a rational, got " + j.dump());
}

Json rationals_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename F>
auto parse_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace

FiniteMetric metric_from_json(const Json& j) {
  return parse_guard([&] {
    if (!j.is_object() || !j.contains("dist")) throw Error(ErrorCode::Parse, "metric JSON needs a \"dist\" matrix");
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : j.at("dist")) rows.push_back(rationals_from_json(row));
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return validate_metric(std::move(rows), std::move(labels));
  });
}

Json metric_to_json(const FiniteMetric& m) {
  Json labels = Json::array();
  for (PointId x = 0; x < m.size(); ++x) labels.push_back(m.label(x));
  Json dist = Json::array();
  for (PointId x = 0; x < m.size(); ++x) {
    auto row = m.row(x);
    dist.push_back(rationals_to_json(std::vector<Rational>(row.begin(), row.end())));
  }
  return {{"labels", labels}, {"dist", dist}};
}

FiniteMetric metric_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (header) {
      labels = std::move(cells);
      header = false;
      continue;
    }
    std::vector<Rational> row;
    for (const auto& c : cells) row.push_back(parse_rational(c));
    rows.push_back(std::move(row));
  }
  if (header) throw Error(ErrorCode::Parse, "CSV metric is empty");
  if (labels.size() != rows.size()) {
    throw Error(ErrorCode::NotSquare, "CSV header names " + std::to_string(labels.size()) + " points but there are " +
                                          std::to_string(rows.size()) + " rows");
  }
  return validate_metric(std::move(rows), std::move(labels));
}

std::string metric_to_csv(const FiniteMetric& m) {
  std::string out;
  for (PointId x = 0; x < m.size(); ++x) out += (x ? "," : "") + m.label(x);
  out += "\n";
  for (PointId x = 0; x < m.size(); ++x) {
    for (PointId y = 0; y < m.size(); ++y) out += (y ? "," : "") + format_rational(m(x, y));
    out += "\n";
  }
  return out;
}

FiniteMetric load_metric(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) return metric_from_csv(buf.str());
  return parse_guard([&] { return metric_from_json(Json::parse(buf.str())); });
}

Json space_to_json(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::Metric:
      return {{"kind", "metric"}, {"metric", metric_to_json(*space.metric())}};
    case SpaceKind::Line:
      return {{"kind", "line"}, {"line", rationals_to_json(space.line_coordinates())}};
    case SpaceKind::Plane: {
      Json pts = Json::array();
      for (const auto& p : space.plane_points()) pts.push_back({p.x, p.y});
      return {{"kind", "plane"}, {"norm", norm_name(space.norm())}, {"points", pts}};
    }
  }
  return {};
}

SpacePtr space_from_json(const Json& j) {
  return parse_guard([&]() -> SpacePtr {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "metric") return Space::from_metric(std::make_shared<const FiniteMetric>(metric_from_json(j.at("metric"))));
    if (kind == "line") return Space::line(rationals_from_json(j.at("line")));
    if (kind == "plane") {
      const std::string norm = j.at("norm").get<std::string>();
      Norm n = Norm::L2;
      if (norm == "L1") n = Norm::L1;
      else if (norm == "LInf") n = Norm::LInf;
      else if (norm != "L2") throw Error(ErrorCode::Parse, "unknown norm '" + norm + "'");
      std::vector<PlanePoint> pts;
      for (const auto& p : j.at("points")) pts.push_back(make_plane_point(p.at(0).get<double>(), p.at(1).get<double>()));
      return Space::plane(std::move(pts), n);
    }
    throw Error(ErrorCode::Parse, "unknown space kind '" + kind + "'");
  });
}

Json location_to_json(const Location& loc) {
  if (auto p = std::get_if<PointId>(&loc)) return *p;
  if (auto r = std::get_if<Rational>(&loc)) return format_rational(*r);
  const auto& pp = std::get<PlanePoint>(loc);
  return Json::array({pp.x, pp.y});
}

Location location_from_json(const Space& space, const Json& j) {
  return parse_guard([&]() -> Location {
    switch (space.kind()) {
      case SpaceKind::Metric: return j.get<PointId>();
      case SpaceKind::Line: return rational_from_json(j);
      case SpaceKind::Plane: return make_plane_point(j.at(0).get<double>(), j.at(1).get<double>());
    }
    return PointId{0};
  });
}

Json decision_to_json(const Decision& d) {
  Json j = {{"chosen", d.chosen}, {"moves", rationals_to_json(d.moves)}, {"total", format_rational(d.total_cost)}};
  if (d.distribution) j["distribution"] = rationals_to_json(*d.distribution);
  if (!d.phases.empty()) {
    Json phases = Json::array();
    for (const auto& p : d.phases) phases.push_back({{"active", p.active}, {"delta", format_rational(p.delta)}});
    j["phases"] = phases;
  }
  if (d.virtual_moves) j["virtual_moves"] = rationals_to_json(*d.virtual_moves);
  return j;
}

Decision decision_from_json(const Json& j) {
  return parse_guard([&] {
    Decision d;
    d.chosen = j.at("chosen").get<std::size_t>();
    d.moves = rationals_from_json(j.at("moves"));
    d.total_cost = rational_from_json(j.at("total"));
    if (j.contains("distribution")) d.distribution = rationals_from_json(j.at("distribution"));
    if (j.contains("phases")) {
      for (const auto& p : j.at("phases")) {
        d.phases.push_back({p.at("active").get<std::vector<std::size_t>>(), rational_from_json(p.at("delta"))});
      }
    }
    if (j.contains("virtual_moves")) d.virtual_moves = rationals_from_json(j.at("virtual_moves"));
    return d;
  });
}

Json decomposition_to_json(const FiniteMetric& m, const SplitDecomposition& dec) {
  Json splits = Json::array();
  for (const auto& ws : dec.splits) {
    Json a = Json::array(), b = Json::array();
    for (PointId x = 0; x < m.size(); ++x) ((ws.split.side_a >> x) & 1u ? a : b).push_back(m.label(x));
    splits.push_back({{"split", {a, b}}, {"alpha", format_rational(ws.alpha)}});
  }
  return {{"splits", splits},
          {"residue", metric_to_json(dec.residue).at("dist")},
          {"totally_decomposable", dec.totally_decomposable}};
}

Json vertices_to_json(const std::vector<CoordinateVector>& vertices) {
  Json out = Json::array();
  for (const auto& v : vertices) out.push_back(rationals_to_json(v.values));
  return out;
}

Json ratio_to_json(const RatioReport& r) {
  auto opt = [](const std::optional<Rational>& v) -> Json {
    return v ? Json(format_rational(*v)) : Json(nullptr);
  };
  auto approx = [](const std::optional<Rational>& v) -> Json {
    return v ? Json(v->convert_to<double>()) : Json(nullptr);
  };
  return {{"alg_cost", format_rational(r.alg_cost)},
          {"opt_cost", format_rational(r.opt_cost)},
          {"ratio", opt(r.ratio)},
          {"ratio_approx", approx(r.ratio)},
          {"allowance", format_rational(r.allowance)},
          {"adjusted_ratio", opt(r.adjusted_ratio)},
          {"adjusted_ratio_approx", approx(r.adjusted_ratio)}};
}

Json verify_to_json(const VerifyReport& r) {
  return {{"checked", r.checked},
          {"failures", r.failures},
          {"first_witness", r.first_witness.empty() ? Json(nullptr) : Json::parse(r.first_witness)}};
}

Json breakdown_to_json(const PotentialBreakdown& p) {
  Json eps = Json::array();
  for (const auto& row : p.eps) eps.push_back(rationals_to_json(row));
  return {{"D", format_rational(p.D)},         {"M", format_rational(p.M)},
          {"phi_cdrs", format_rational(p.phi_cdrs)}, {"eps", eps},
          {"eps_total", rationals_to_json(p.eps_total)}, {"e", rationals_to_json(p.e)},
          {"e_max", format_rational(p.e_max)}, {"H", format_rational(p.H)},
          {"phi", format_rational(p.phi)}};
}

void write_transcript(std::ostream& out, const Transcript& t) {
  Json header = {{"type", "header"},
                 {"algorithm", t.algorithm},
                 {"adversary", t.adversary},
                 {"seed", t.seed},
                 {"trial", t.trial},
                 {"k", t.k()},
                 {"random_slack_rule", t.random_slack_rule == RandomSlackRule::Inverse ? "inverse" : "direct"},
                 {"initial", t.initial},
                 {"space", space_to_json(*t.space)}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const StepRecord& s = t.steps[i];
    Json alg = Json::array();
    for (const auto& loc : s.alg_positions) alg.push_back(location_to_json(loc));
    Json state = Json::object();
    for (const auto& [name, values] : s.state) state[name] = rationals_to_json(values);
    Json line = {{"type", "step"},
                 {"t", i},
                 {"move", {{"kind", move_kind_name(s.move.kind)}, {"point", s.move.point}, {"server", s.move.server}}},
                 {"alg_cost", format_rational(s.alg_cost)},
                 {"adv_cost", format_rational(s.adv_cost)},
                 {"alg", alg},
                 {"adv", s.adv_positions},
                 {"state", state}};
    if (s.decision) line["decision"] = decision_to_json(*s.decision);
    out << line.dump() << '\n';
  }
  Json totals = {{"type", "totals"},
                 {"steps", t.steps.size()},
                 {"alg_total", format_rational(t.alg_total)},
                 {"adv_total", format_rational(t.adv_total)}};
  out << totals.dump() << '\n';
}

std::string transcript_to_jsonl(const Transcript& t) {
  std::ostringstream out;
  write_transcript(out, t);
  return out.str();
}

namespace {

void finish(Transcript& t, bool have_totals, const Rational& alg_sum, const Rational& adv_sum) {
  if (!have_totals) {
    t.alg_total = alg_sum;
    t.adv_total = adv_sum;
  }
}

}  // namespace

std::vector<Transcript> read_transcripts(std::istream& in) {
  return parse_guard([&] {
    std::vector<Transcript> all;
    std::string line;
    bool have_totals = false;
    Rational alg_sum = 0, adv_sum = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const Json j = Json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (!all.empty()) finish(all.back(), have_totals, alg_sum, adv_sum);
        Transcript t;
        t.algorithm = j.at("algorithm").get<std::string>();
        t.adversary = j.at("adversary").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.trial = j.at("trial").get<std::uint64_t>();
        t.random_slack_rule =
            j.value("random_slack_rule", "inverse") == "direct" ? RandomSlackRule::Direct : RandomSlackRule::Inverse;
        t.initial = j.at("initial").get<std::vector<PointId>>();
        t.space = space_from_json(j.at("space"));
        for (auto p : t.initial) t.space->location(p);
        all.push_back(std::move(t));
        have_totals = false;
        alg_sum = adv_sum = 0;
        continue;
      }
      if (all.empty()) throw Error(ErrorCode::Parse, "record before the first header");
      Transcript& t = all.back();
      if (have_totals) throw Error(ErrorCode::Parse, "record after the totals line");
      if (type == "step") {
        StepRecord s;
        const Json& m = j.at("move");
        s.move = {parse_move_kind(m.at("kind").get<std::string>()), m.at("point").get<PointId>(),
                  m.at("server").get<std::size_t>()};
        if (s.move.point >= t.space->pool_size() || s.move.server >= t.k()) {
          throw Error(ErrorCode::Parse, "step refers to a point or server that does not exist");
        }
        s.alg_cost = rational_from_json(j.at("alg_cost"));
        s.adv_cost = rational_from_json(j.at("adv_cost"));
        for (const auto& loc : j.at("alg")) s.alg_positions.push_back(location_from_json(*t.space, loc));
        s.adv_positions = j.at("adv").get<std::vector<PointId>>();
        for (const auto& [name, values] : j.at("state").items()) s.state[name] = rationals_from_json(values);
        if (j.contains("decision")) s.decision = decision_from_json(j.at("decision"));
        alg_sum += s.alg_cost;
        adv_sum += s.adv_cost;
        t.steps.push_back(std::move(s));
      } else if (type == "totals") {
        t.alg_total = rational_from_json(j.at("alg_total"));
        t.adv_total = rational_from_json(j.at("adv_total"));
        if (j.at("steps").get<std::size_t>() != t.steps.size() || t.alg_total != alg_sum || t.adv_total != adv_sum) {
          throw Error(ErrorCode::Parse, "transcript totals disagree with its steps");
        }
        have_totals = true;
      } else {
        throw Error(ErrorCode::Parse, "unknown record type '" + type + "'");
      }
    }
    if (!all.empty()) finish(all.back(), have_totals, alg_sum, adv_sum);
    return all;
  });
}

std::vector<Transcript> transcripts_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return read_transcripts(in);
}

Transcript transcript_from_jsonl(const std::string& text) {
  auto all = transcripts_from_jsonl(text);
  if (all.size() != 1) {
    throw Error(ErrorCode::Parse, "expected one transcript, found " + std::to_string(all.size()));
  }
  return std::move(all.front());
}

}  // namespace kserver
