#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polystab/checker.hpp"
#include "polystab/critical_set.hpp"
#include "polystab/errors.hpp"
#include "polystab/io.hpp"
#include "polystab/rng.hpp"

namespace {

using namespace polystab;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitStable = 0;
constexpr int kExitUnstable = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

struct CommonFlags {
  std::string region;
  std::string out;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> boundary_count;
  std::optional<int> max_depth;
  std::optional<double> tol;
  std::optional<std::uint64_t> budget;
  std::optional<int> threads;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
  cmd->add_option("--region", fl.region,
                  "Stability region: hurwitz | disk | shifted:<sigma> | sector:<phi>");
  cmd->add_option("--out", fl.out, "Write output to this path instead of stdout");
  cmd->add_option("--samples", fl.samples, "Oracle / value-set sample count");
  cmd->add_option("--seed", fl.seed, "Random seed (default 42)");
  cmd->add_option("--boundary-count", fl.boundary_count, "Boundary sweep size");
  cmd->add_option("--max-depth", fl.max_depth, "Lambda-box bisection depth limit");
  cmd->add_option("--tol", fl.tol, "Zero-exclusion margin");
  cmd->add_option("--budget", fl.budget, "Critical-family budget");
  cmd->add_option("--threads", fl.threads, "Worker threads (1 = serial reference)");
  cmd->add_flag("--timing", fl.timing, "Record wall time in the report");
}

FamilyFile load_with_flags(const std::string& path, const CommonFlags& fl) {
  FamilyFile ff = load_family_file(path);
  if (!fl.region.empty()) ff.region = Region::parse(fl.region);
  if (fl.samples) ff.config.oracle_samples = *fl.samples;
  if (fl.seed) ff.config.seed = *fl.seed;
  if (fl.boundary_count) ff.config.boundary_count = *fl.boundary_count;
  if (fl.max_depth) ff.config.max_depth = *fl.max_depth;
  if (fl.tol) ff.config.epsilon_exclusion = *fl.tol;
  if (fl.budget) ff.config.critical_budget = *fl.budget;
  if (fl.threads) ff.config.threads = *fl.threads;
  ff.config.validate();
  return ff;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write file: " + out);
  f << text;
}

int status_code(Status s) {
  switch (s) {
    case Status::kStable:
      return kExitStable;
    case Status::kUnstable:
      return kExitUnstable;
    case Status::kInconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Same path selection as family_stable, exposed for the enumerate command.
CriticalEnumeration select_enumeration(const MatrixFamily& f, const Region& r,
                                       MatrixFamily& converted_storage) {
  if (f.all_interval() && r.kind() == Region::Kind::kHurwitz) {
    return CriticalEnumeration::epsilon_b2(f);
  }
  if (f.all_polytopic()) {
    bool all_two = true;
    for (const Entry& e : f.entries) {
      all_two = all_two && std::get<PolytopicEntry>(e).generators.size() == 2;
    }
    return all_two ? CriticalEnumeration::remark1(f)
                   : CriticalEnumeration::epsilon_a(f);
  }
  converted_storage = as_polytopic(f);
  return CriticalEnumeration::epsilon_a(converted_storage);
}

int run_check(const std::string& path, const CommonFlags& fl) {
  FamilyFile ff = load_with_flags(path, fl);
  ReportOptions opts;
  opts.command = "check";
  opts.input = path;
  opts.include_timing = fl.timing;
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = family_stable(ff.family, ff.region, ff.config);
  } catch (const CapacityError& e) {
    v.status = Status::kInconclusive;
    v.diagnostics.exhausted = std::string(e.what()) + ": " +
                              std::to_string(e.count()) +
                              " critical families (raise --budget to proceed)";
  }
  opts.wall_time_s = seconds_since(t0);
  emit(report_to_json(ff, v, opts), fl.out);
  return status_code(v.status);
}

int run_oracle(const std::string& path, const CommonFlags& fl) {
  FamilyFile ff = load_with_flags(path, fl);
  ReportOptions opts;
  opts.command = "oracle";
  opts.input = path;
  opts.include_timing = fl.timing;
  auto t0 = std::chrono::steady_clock::now();
  Verdict v = monte_carlo_oracle(ff.family, ff.region, ff.config);
  if (v.status == Status::kStable) {
    opts.note = "no counterexample at " + std::to_string(v.diagnostics.samples) +
                " members examined; the oracle is one-sided";
  }
  opts.wall_time_s = seconds_since(t0);
  emit(report_to_json(ff, v, opts), fl.out);
  return status_code(v.status);
}

ordered_json compare_entry(const std::string& path, const FamilyFile& ff,
                           const CompareOutcome& oc) {
  ordered_json j;
  j["input"] = path;
  j["verdict"] = oc.agree ? "agree" : "disagree";
  j["marginal_band"] = oc.marginal_band;
  j["margin"] = oc.margin;
  j["check"] = to_string(oc.check.status);
  j["oracle"] = to_string(oc.oracle.status);
  j["region"] = ff.region.name();
  return j;
}

int run_compare(const std::string& path, const std::string& batch_dir,
                const CommonFlags& fl) {
  if (batch_dir.empty()) {
    FamilyFile ff = load_with_flags(path, fl);
    ReportOptions opts;
    opts.command = "compare";
    opts.input = path;
    opts.include_timing = fl.timing;
    auto t0 = std::chrono::steady_clock::now();
    CompareOutcome oc = compare_family(ff.family, ff.region, ff.config);
    opts.wall_time_s = seconds_since(t0);
    emit(compare_report_to_json(ff, oc, opts), fl.out);
    return oc.agree ? kExitStable : kExitUnstable;
  }

  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(batch_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::invalid_argument("no .json family files in: " + batch_dir);
  }

  ordered_json report;
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["command"] = "compare";
  report["batch"] = batch_dir;
  ordered_json results = ordered_json::array();
  std::uint64_t agree = 0, disagree = 0, marginal = 0, hard_disagree = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const std::string& file : files) {
    FamilyFile ff = load_with_flags(file, fl);
    CompareOutcome oc = compare_family(ff.family, ff.region, ff.config);
    results.push_back(compare_entry(file, ff, oc));
    if (oc.marginal_band) ++marginal;
    if (oc.agree) {
      ++agree;
    } else {
      ++disagree;
      if (!oc.marginal_band) ++hard_disagree;
    }
  }
  report["results"] = results;
  ordered_json tally;
  tally["files"] = files.size();
  tally["agree"] = agree;
  tally["disagree"] = disagree;
  tally["marginal_band"] = marginal;
  tally["disagree_outside_marginal_band"] = hard_disagree;
  report["tally"] = tally;
  report["wall_time_s"] = fl.timing ? ordered_json(seconds_since(t0)) : ordered_json(nullptr);
  emit(report.dump(2) + "\n", fl.out);
  return hard_disagree == 0 ? kExitStable : kExitUnstable;
}

ordered_json coeffs_json(const Polynomial& p) {
  if (p.is_zero()) return ordered_json::array({0.0});
  return ordered_json(p.coeffs());
}

int run_enumerate(const std::string& path, std::uint64_t limit,
                  const CommonFlags& fl) {
  FamilyFile ff = load_with_flags(path, fl);
  MatrixFamily converted;
  CriticalEnumeration en = select_enumeration(ff.family, ff.region, converted);
  std::uint64_t count = en.count();
  if (fl.budget && count > *fl.budget) {
    std::ostringstream os;
    os << "{\n  \"tool\": \"" << kToolName << "\",\n  \"command\": \"enumerate\",\n"
       << "  \"count\": " << count << ",\n"
       << "  \"error\": \"critical subset exceeds the budget of " << *fl.budget
       << "\"\n}\n";
    emit(os.str(), fl.out);
    return kExitInconclusive;
  }

  std::uint64_t emitted = std::min(count, limit);
  std::ostringstream os;
  os << "{\n  \"tool\": \"" << kToolName << "\",\n  \"command\": \"enumerate\",\n"
     << "  \"count\": " << count << ",\n  \"emitted\": " << emitted
     << ",\n  \"families\": [";
  for (std::uint64_t i = 0; i < emitted; ++i) {
    CriticalFamily cf = en.at(i);
    ordered_json j;
    j["index"] = i;
    j["permutation"] = cf.permutation();
    ordered_json des = ordered_json::array();
    for (const DesignatedEdge& e : cf.designated) {
      ordered_json d;
      d["row"] = e.row;
      d["col"] = e.col;
      d["p0"] = coeffs_json(e.p0);
      d["p1"] = coeffs_json(e.p1);
      d["gen0"] = e.gen0;
      d["gen1"] = e.gen1;
      des.push_back(d);
    }
    j["designated"] = des;
    ordered_json fixed = ordered_json::array();
    for (const FixedCell& c : cf.fixed) {
      ordered_json fc;
      fc["row"] = c.row;
      fc["col"] = c.col;
      fc["value"] = coeffs_json(c.value);
      fc["gen"] = c.gen;
      fixed.push_back(fc);
    }
    j["fixed"] = fixed;
    os << (i == 0 ? "\n    " : ",\n    ") << j.dump();
  }
  os << (emitted > 0 ? "\n  " : "") << "]\n}\n";
  emit(os.str(), fl.out);
  return kExitStable;
}

int run_valueset(const std::string& path, const CommonFlags& fl) {
  FamilyFile ff = load_with_flags(path, fl);
  const int k_points = ff.config.boundary_count;
  const int members = fl.samples ? *fl.samples : 64;
  if (members < 1) throw std::invalid_argument("--samples must be >= 1");

  // Members are drawn once and tracked across the whole sweep, so a row's
  // member id identifies one concrete matrix.
  std::vector<Polynomial> dets;
  dets.reserve(static_cast<size_t>(members));
  double bound = 1.0;
  for (int j = 0; j < members; ++j) {
    Rng rng = Rng::stream(ff.config.seed, static_cast<std::uint64_t>(j));
    Polynomial d = det(sample(ff.family, random_params(ff.family, rng)));
    if (!d.is_zero()) bound = std::max(bound, cauchy_root_bound(d));
    dets.push_back(std::move(d));
  }
  double sweep_limit = ff.config.sweep_limit_multiplier * bound;

  std::ostringstream os;
  os.precision(17);
  os << "boundary_parameter,re,im,member\n";
  bool periodic = ff.region.has_bounded_boundary();
  for (int k = 0; k < k_points; ++k) {
    double t = periodic ? static_cast<double>(k) / k_points
                        : static_cast<double>(k) / (k_points - 1);
    std::complex<double> z = ff.region.boundary_point(t, sweep_limit);
    double param = ff.region.boundary_parameter(t, sweep_limit);
    for (int j = 0; j < members; ++j) {
      std::complex<double> val = dets[static_cast<size_t>(j)].evaluate(z);
      os << param << "," << val.real() << "," << val.imag() << "," << j << "\n";
    }
  }
  emit(os.str(), fl.out);
  return kExitStable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Robust D-stability of polytopic and interval polynomial matrices: "
      "critical-subset checks, a brute-force oracle, and value-set export"};
  app.require_subcommand(1);

  std::string check_file, oracle_file, compare_file, enum_file, vs_file;
  std::string batch_dir;
  std::uint64_t enum_limit = 1000;
  CommonFlags fl_check, fl_oracle, fl_compare, fl_enum, fl_vs;

  CLI::App* c_check = app.add_subcommand("check", "Decide D-stability via the critical subset");
  c_check->add_option("file", check_file, "Family JSON file")->required();
  add_common(c_check, fl_check);

  CLI::App* c_oracle = app.add_subcommand("oracle", "Monte Carlo falsification (one-sided)");
  c_oracle->add_option("file", oracle_file, "Family JSON file")->required();
  add_common(c_oracle, fl_oracle);

  CLI::App* c_compare =
      app.add_subcommand("compare", "Run check and oracle, report agreement");
  c_compare->add_option("file", compare_file, "Family JSON file");
  c_compare->add_option("--batch", batch_dir, "Directory of family JSON files");
  add_common(c_compare, fl_compare);

  CLI::App* c_enum =
      app.add_subcommand("enumerate", "Dump the critical subset as JSON");
  c_enum->add_option("file", enum_file, "Family JSON file")->required();
  c_enum->add_option("--limit", enum_limit, "Max families to emit (count is always exact)");
  add_common(c_enum, fl_enum);

  CLI::App* c_vs = app.add_subcommand("valueset", "Export det value-set samples as CSV");
  c_vs->add_option("file", vs_file, "Family JSON file")->required();
  add_common(c_vs, fl_vs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  try {
    if (*c_check) return run_check(check_file, fl_check);
    if (*c_oracle) return run_oracle(oracle_file, fl_oracle);
    if (*c_compare) {
      if (compare_file.empty() && batch_dir.empty()) {
        std::cerr << "error: compare needs a file or --batch\n";
        return kExitInputError;
      }
      return run_compare(compare_file, batch_dir, fl_compare);
    }
    if (*c_enum) return run_enumerate(enum_file, enum_limit, fl_enum);
    if (*c_vs) return run_valueset(vs_file, fl_vs);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << " (count " << e.count() << ")\n";
    return kExitInconclusive;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
