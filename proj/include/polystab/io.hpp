#pragma once

#include <string>

#include "polystab/checker.hpp"
#include "polystab/family.hpp"
#include "polystab/region.hpp"

namespace polystab {

inline constexpr const char* kToolName = "polystab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Parsed family document: the uncertainty grid, the target region, and any
/// checker settings the file carries (missing fields keep their defaults).
struct FamilyFile {
  MatrixFamily family;
  Region region = Region::hurwitz();
  CheckerConfig config;
};

/// Parses a family document:
///   { "n": int, "region": "hurwitz",
///     "entries": [[cell, ...], ...],   // n rows of n cells
///     "config": { "boundary_count": ..., ... } }          (optional)
/// with cells either
///   { "kind": "polytopic", "generators": [[c0, c1, ...], ...] }
/// or
///   { "kind": "interval", "lower": [c0, ...], "upper": [c0, ...] }
/// Coefficient arrays are ascending (constant term first). Malformed JSON
/// and schema violations throw std::invalid_argument with a line:column
/// anchored message.
FamilyFile parse_family_file(const std::string& text);

/// parse_family_file on the file's contents; unreadable file throws
/// std::invalid_argument.
FamilyFile load_family_file(const std::string& path);

/// Canonical serialization; parsing it back yields an identical family,
/// region, and config.
std::string serialize_family_file(const FamilyFile& f);

struct ReportOptions {
  std::string command;    // "check" | "oracle" | "compare" | ...
  std::string input;      // input path as given on the command line
  bool include_timing = false;
  double wall_time_s = 0.0;
  std::string note;       // extra labeling, e.g. the oracle's one-sidedness
};

/// Deterministic JSON report: verdict, witness (present exactly when the
/// status is unstable), diagnostics, config echo, tool version. Wall time
/// serializes as null unless opts.include_timing is set, keeping reports
/// byte-identical for identical (input, seed, config).
std::string report_to_json(const FamilyFile& ff, const Verdict& v,
                           const ReportOptions& opts);

/// Report for a compare run: both sub-verdicts plus the agreement call and
/// the marginal-band classification.
std::string compare_report_to_json(const FamilyFile& ff, const CompareOutcome& oc,
                                   const ReportOptions& opts);

}  // namespace polystab
