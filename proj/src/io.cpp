#include "polystab/io.hpp"

#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

#include "json.hpp"

namespace polystab {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Line-anchored schema errors. nlohmann's DOM drops source positions, so a
// minimal structural walker relocates a JSON path inside the raw text; it is
// only invoked on documents that already parsed, so it can assume
// well-formed input.
// ---------------------------------------------------------------------------

using PathElem = std::variant<std::string, size_t>;
using Path = std::vector<PathElem>;

std::pair<size_t, size_t> line_col(const std::string& text, size_t offset) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

size_t skip_ws(const std::string& t, size_t i) {
  while (i < t.size() &&
         (t[i] == ' ' || t[i] == '\t' || t[i] == '\n' || t[i] == '\r')) {
    ++i;
  }
  return i;
}

size_t skip_string(const std::string& t, size_t i) {
  ++i;  // opening quote
  while (i < t.size()) {
    if (t[i] == '\\') {
      i += 2;
    } else if (t[i] == '"') {
      return i + 1;
    } else {
      ++i;
    }
  }
  return i;
}

size_t skip_container(const std::string& t, size_t i, char open, char close) {
  int depth = 1;
  ++i;
  while (i < t.size() && depth > 0) {
    char c = t[i];
    if (c == '"') {
      i = skip_string(t, i);
      continue;
    }
    if (c == open) ++depth;
    if (c == close) --depth;
    ++i;
  }
  return i;
}

size_t skip_value(const std::string& t, size_t i) {
  i = skip_ws(t, i);
  if (i >= t.size()) return i;
  char c = t[i];
  if (c == '"') return skip_string(t, i);
  if (c == '{') return skip_container(t, i, '{', '}');
  if (c == '[') return skip_container(t, i, '[', ']');
  while (i < t.size() && t[i] != ',' && t[i] != '}' && t[i] != ']' &&
         t[i] != ' ' && t[i] != '\t' && t[i] != '\n' && t[i] != '\r') {
    ++i;
  }
  return i;
}

// Byte offset of the value addressed by `path`, or 0 when the walk fails.
size_t locate(const std::string& t, const Path& path) {
  size_t i = skip_ws(t, 0);
  for (const PathElem& pe : path) {
    i = skip_ws(t, i);
    if (const auto* key = std::get_if<std::string>(&pe)) {
      if (i >= t.size() || t[i] != '{') return 0;
      ++i;
      bool found = false;
      while (i < t.size()) {
        i = skip_ws(t, i);
        if (i >= t.size() || t[i] == '}') break;
        if (t[i] == ',') {
          ++i;
          continue;
        }
        size_t key_start = i + 1;
        i = skip_string(t, i);
        std::string k = t.substr(key_start, i - 1 - key_start);
        i = skip_ws(t, i);
        if (i < t.size() && t[i] == ':') ++i;
        i = skip_ws(t, i);
        if (k == *key) {
          found = true;
          break;
        }
        i = skip_value(t, i);
      }
      if (!found) return 0;
    } else {
      if (i >= t.size() || t[i] != '[') return 0;
      ++i;
      size_t want = std::get<size_t>(pe);
      size_t index = 0;
      while (true) {
        i = skip_ws(t, i);
        if (i >= t.size() || t[i] == ']') return 0;
        if (t[i] == ',') {
          ++i;
          continue;
        }
        if (index == want) break;
        i = skip_value(t, i);
        ++index;
      }
    }
  }
  return skip_ws(t, i);
}

std::string path_to_string(const Path& path) {
  std::ostringstream os;
  bool first = true;
  for (const PathElem& pe : path) {
    if (const auto* key = std::get_if<std::string>(&pe)) {
      os << (first ? "" : ".") << *key;
    } else {
      os << "[" << std::get<size_t>(pe) << "]";
    }
    first = false;
  }
  return os.str();
}

[[noreturn]] void fail_at(const std::string& text, const Path& path,
                          const std::string& msg) {
  auto [line, col] = line_col(text, locate(text, path));
  std::ostringstream os;
  os << "line " << line << ", column " << col << ": " << msg;
  std::string where = path_to_string(path);
  if (!where.empty()) os << " (at " << where << ")";
  throw std::invalid_argument(os.str());
}

std::vector<double> number_array(const std::string& text, const json& a,
                                 const Path& path) {
  if (!a.is_array() || a.empty()) {
    fail_at(text, path, "expected a nonempty array of numbers");
  }
  std::vector<double> out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) {
      Path p = path;
      p.push_back(i);
      fail_at(text, p, "expected a number");
    }
    out.push_back(a[i].get<double>());
  }
  return out;
}

Entry parse_cell(const std::string& text, const json& cell, const Path& path) {
  if (!cell.is_object()) fail_at(text, path, "expected a cell object");
  if (!cell.contains("kind") || !cell["kind"].is_string()) {
    fail_at(text, path, "cell needs a \"kind\" of \"polytopic\" or \"interval\"");
  }
  std::string kind = cell["kind"].get<std::string>();
  if (kind == "polytopic") {
    for (const auto& [k, v] : cell.items()) {
      if (k != "kind" && k != "generators") {
        Path p = path;
        p.push_back(k);
        fail_at(text, p, "unknown key in a polytopic cell");
      }
    }
    if (!cell.contains("generators") || !cell["generators"].is_array() ||
        cell["generators"].empty()) {
      fail_at(text, path, "polytopic cell needs a nonempty \"generators\" array");
    }
    PolytopicEntry e;
    for (size_t g = 0; g < cell["generators"].size(); ++g) {
      Path p = path;
      p.push_back(std::string("generators"));
      p.push_back(g);
      e.generators.emplace_back(number_array(text, cell["generators"][g], p));
    }
    return e;
  }
  if (kind == "interval") {
    for (const auto& [k, v] : cell.items()) {
      if (k != "kind" && k != "lower" && k != "upper") {
        Path p = path;
        p.push_back(k);
        fail_at(text, p, "unknown key in an interval cell");
      }
    }
    if (!cell.contains("lower") || !cell.contains("upper")) {
      fail_at(text, path, "interval cell needs \"lower\" and \"upper\" arrays");
    }
    IntervalEntry e;
    Path pl = path, pu = path;
    pl.push_back(std::string("lower"));
    pu.push_back(std::string("upper"));
    e.lower = number_array(text, cell["lower"], pl);
    e.upper = number_array(text, cell["upper"], pu);
    if (e.lower.size() != e.upper.size()) {
      fail_at(text, pu, "\"lower\" and \"upper\" must have equal length");
    }
    for (size_t k = 0; k < e.lower.size(); ++k) {
      if (e.lower[k] > e.upper[k]) {
        Path p = pu;
        p.push_back(k);
        fail_at(text, p, "interval bound below its lower bound");
      }
    }
    return e;
  }
  Path p = path;
  p.push_back(std::string("kind"));
  fail_at(text, p, "unknown cell kind \"" + kind + "\"");
}

void overlay_config(const std::string& text, const json& c, CheckerConfig& cfg) {
  Path base{std::string("config")};
  auto num = [&](const char* key, auto& field, bool integral) {
    if (!c.contains(key)) return;
    Path p = base;
    p.push_back(std::string(key));
    const json& v = c[key];
    if (integral ? !v.is_number_integer() : !v.is_number()) {
      fail_at(text, p, integral ? "expected an integer" : "expected a number");
    }
    field = v.get<std::decay_t<decltype(field)>>();
  };
  for (const auto& [k, v] : c.items()) {
    static const char* known[] = {
        "boundary_count", "sweep_limit_multiplier", "max_depth",
        "epsilon_exclusion", "oracle_samples", "seed", "critical_budget",
        "threads", "marginal_root_tol", "refine_rounds", "refine_fraction",
        "node_budget"};
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) {
      Path p = base;
      p.push_back(k);
      fail_at(text, p, "unknown config key");
    }
  }
  num("boundary_count", cfg.boundary_count, true);
  num("sweep_limit_multiplier", cfg.sweep_limit_multiplier, false);
  num("max_depth", cfg.max_depth, true);
  num("epsilon_exclusion", cfg.epsilon_exclusion, false);
  num("oracle_samples", cfg.oracle_samples, true);
  num("seed", cfg.seed, true);
  num("critical_budget", cfg.critical_budget, true);
  num("threads", cfg.threads, true);
  num("marginal_root_tol", cfg.marginal_root_tol, false);
  num("refine_rounds", cfg.refine_rounds, true);
  num("refine_fraction", cfg.refine_fraction, false);
  num("node_budget", cfg.node_budget, true);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail_at(text, base, e.what());
  }
}

json coeffs_json(const Polynomial& p) {
  if (p.is_zero()) return json::array({0.0});
  return json(p.coeffs());
}

json config_json(const CheckerConfig& c) {
  json j;
  j["boundary_count"] = c.boundary_count;
  j["sweep_limit_multiplier"] = c.sweep_limit_multiplier;
  j["max_depth"] = c.max_depth;
  j["epsilon_exclusion"] = c.epsilon_exclusion;
  j["oracle_samples"] = c.oracle_samples;
  j["seed"] = c.seed;
  j["critical_budget"] = c.critical_budget;
  j["threads"] = c.threads;
  j["marginal_root_tol"] = c.marginal_root_tol;
  j["refine_rounds"] = c.refine_rounds;
  j["refine_fraction"] = c.refine_fraction;
  j["node_budget"] = c.node_budget;
  return j;
}

json witness_json(const Witness& w) {
  json j;
  if (w.params) {
    json cells = json::array();
    for (const auto& cell : w.params->cells) cells.push_back(cell);
    j["cells"] = cells;
  }
  if (!w.lambdas.empty()) j["lambdas"] = w.lambdas;
  if (w.critical_index) j["critical_index"] = *w.critical_index;
  j["location"] = {{"re", w.location.real()}, {"im", w.location.imag()}};
  j["note"] = w.note;
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["verdict"] = to_string(v.status);
  if (v.status == Status::kUnstable && v.witness) {
    j["witness"] = witness_json(*v.witness);
  }
  json d;
  d["families_checked"] = v.diagnostics.families_checked;
  d["boundary_points"] = v.diagnostics.boundary_points;
  d["subdivisions"] = v.diagnostics.subdivisions;
  d["max_depth_reached"] = v.diagnostics.max_depth_reached;
  d["samples"] = v.diagnostics.samples;
  d["marginal_hits"] = v.diagnostics.marginal_hits;
  if (!v.diagnostics.exhausted.empty()) d["exhausted"] = v.diagnostics.exhausted;
  if (v.status == Status::kInconclusive && v.witness && !v.witness->note.empty()) {
    d["detail"] = v.witness->note;
  }
  j["diagnostics"] = d;
  return j;
}

}  // namespace

FamilyFile parse_family_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t off = e.byte > 0 ? static_cast<size_t>(e.byte) - 1 : 0;
    auto [line, col] = line_col(text, off);
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": malformed JSON";
    throw std::invalid_argument(os.str());
  }
  if (!doc.is_object()) fail_at(text, {}, "expected a top-level object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "n" && k != "region" && k != "entries" && k != "config") {
      fail_at(text, Path{k}, "unknown key (expected n, region, entries, config)");
    }
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    fail_at(text, Path{std::string("n")}, "\"n\" must be an integer");
  }
  int n = doc["n"].get<int>();
  if (n < 1 || n > 16) {
    fail_at(text, Path{std::string("n")}, "\"n\" must be between 1 and 16");
  }

  FamilyFile out;
  out.family.n = n;
  if (doc.contains("region")) {
    Path p{std::string("region")};
    if (!doc["region"].is_string()) fail_at(text, p, "\"region\" must be a string");
    try {
      out.region = Region::parse(doc["region"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail_at(text, p, e.what());
    }
  }

  Path pe{std::string("entries")};
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    fail_at(text, pe, "\"entries\" must be an array of rows");
  }
  const json& rows = doc["entries"];
  if (static_cast<int>(rows.size()) != n) {
    fail_at(text, pe, "expected exactly " + std::to_string(n) + " rows");
  }
  for (int i = 0; i < n; ++i) {
    Path pr = pe;
    pr.push_back(static_cast<size_t>(i));
    if (!rows[static_cast<size_t>(i)].is_array() ||
        static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) {
      fail_at(text, pr, "expected a row of exactly " + std::to_string(n) + " cells");
    }
    for (int j = 0; j < n; ++j) {
      Path pc = pr;
      pc.push_back(static_cast<size_t>(j));
      out.family.entries.push_back(
          parse_cell(text, rows[static_cast<size_t>(i)][static_cast<size_t>(j)], pc));
    }
  }

  if (doc.contains("config")) {
    if (!doc["config"].is_object()) {
      fail_at(text, Path{std::string("config")}, "\"config\" must be an object");
    }
    overlay_config(text, doc["config"], out.config);
  }
  out.family.validate();
  return out;
}

FamilyFile load_family_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_family_file(ss.str());
}

std::string serialize_family_file(const FamilyFile& f) {
  json doc;
  doc["n"] = f.family.n;
  doc["region"] = f.region.name();
  json rows = json::array();
  for (int i = 0; i < f.family.n; ++i) {
    json row = json::array();
    for (int j = 0; j < f.family.n; ++j) {
      const Entry& e = f.family.entry(i, j);
      json cell;
      if (const auto* pe = std::get_if<PolytopicEntry>(&e)) {
        cell["kind"] = "polytopic";
        json gens = json::array();
        for (const Polynomial& g : pe->generators) gens.push_back(coeffs_json(g));
        cell["generators"] = gens;
      } else {
        const auto& ie = std::get<IntervalEntry>(e);
        cell["kind"] = "interval";
        cell["lower"] = ie.lower;
        cell["upper"] = ie.upper;
      }
      row.push_back(cell);
    }
    rows.push_back(row);
  }
  doc["entries"] = rows;
  doc["config"] = config_json(f.config);
  return doc.dump(2) + "\n";
}

std::string report_to_json(const FamilyFile& ff, const Verdict& v,
                           const ReportOptions& opts) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = opts.command;
  if (!opts.input.empty()) j["input"] = opts.input;
  j["region"] = ff.region.name();
  json body = verdict_json(v);
  for (auto& [k, val] : body.items()) j[k] = val;
  if (!opts.note.empty()) j["note"] = opts.note;
  j["config"] = config_json(ff.config);
  j["wall_time_s"] = opts.include_timing ? json(opts.wall_time_s) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string compare_report_to_json(const FamilyFile& ff, const CompareOutcome& oc,
                                   const ReportOptions& opts) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = opts.command;
  if (!opts.input.empty()) j["input"] = opts.input;
  j["region"] = ff.region.name();
  j["verdict"] = oc.agree ? "agree" : "disagree";
  j["marginal_band"] = oc.marginal_band;
  j["margin"] = oc.margin;
  j["check"] = verdict_json(oc.check);
  j["oracle"] = verdict_json(oc.oracle);
  if (!opts.note.empty()) j["note"] = opts.note;
  j["config"] = config_json(ff.config);
  j["wall_time_s"] = opts.include_timing ? json(opts.wall_time_s) : json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace polystab
