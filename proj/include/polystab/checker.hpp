#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polystab/complex_box.hpp"
#include "polystab/critical_set.hpp"
#include "polystab/family.hpp"
#include "polystab/region.hpp"

namespace polystab {

enum class Status { kStable, kUnstable, kInconclusive };

std::string to_string(Status s);

/// Evidence attached to a non-stable verdict. For unstable verdicts the
/// witness is independently re-checkable: sampling `params` (when present)
/// or instantiating the critical family at `lambdas` yields a determinant
/// with a root outside the region or within the marginal tolerance of its
/// boundary; that root is `location`.
struct Witness {
  std::vector<double> lambdas;         // per-row edge parameters, when applicable
  std::optional<SampleParams> params;  // family-level assignment, when known
  std::optional<std::uint64_t> critical_index;  // enumeration index, when known
  std::complex<double> location{0.0, 0.0};      // offending root or boundary point
  std::string note;
};

struct Diagnostics {
  std::uint64_t families_checked = 0;
  std::uint64_t boundary_points = 0;  // z evaluations across all families
  std::uint64_t subdivisions = 0;     // lambda-box nodes processed
  int max_depth_reached = 0;
  std::uint64_t samples = 0;        // oracle members drawn
  std::uint64_t marginal_hits = 0;  // members failing only by the marginal band
  std::string exhausted;            // named resource when inconclusive
};

struct Verdict {
  Status status = Status::kInconclusive;
  std::optional<Witness> witness;
  Diagnostics diagnostics;
};

struct CheckerConfig {
  int boundary_count = 512;             // uniform boundary sweep size
  double sweep_limit_multiplier = 10.0; // times the Cauchy root bound
  int max_depth = 24;                   // lambda-box bisection depth
  double epsilon_exclusion = 1e-9;      // required clearance of 0 from enclosures
  int oracle_samples = 10000;
  std::uint64_t seed = 42;
  std::uint64_t critical_budget = 1ull << 22;  // max critical families per run
  int threads = 0;                 // 0 = library default, 1 = serial reference
  double marginal_root_tol = 1e-6; // roots this close to the boundary are marginal
  int refine_rounds = 3;           // local sweep refinement passes
  double refine_fraction = 0.05;   // fraction of sweep points refined per pass
  std::uint64_t node_budget = 1ull << 15;  // bisection nodes per (family, z)

  /// Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

/// Pure D-stability predicate: every root of p inside the open region.
/// Throws std::domain_error on the zero polynomial.
bool is_stable(const Polynomial& p, const Region& r);

/// Verdict-grade root placement: marginal roots (within marginal_tol of the
/// boundary, on either side) fail stability and are flagged.
struct RootPlacement {
  bool stable = false;
  bool marginal = false;  // failed only within the marginal band
  std::complex<double> offender{0.0, 0.0};
};
RootPlacement classify_roots(const Polynomial& p, const Region& r,
                             double marginal_tol);

/// Edge Theorem primitive: D-stability of {(1-l)p0 + l p1 : l in [0,1]}.
Verdict segment_stable(const Polynomial& p0, const Polynomial& p1,
                       const Region& r, const CheckerConfig& cfg);

/// Zero-exclusion over one critical family's lambda-hypercube.
Verdict critical_family_stable(const CriticalFamily& cf, const Region& r,
                               const CheckerConfig& cfg);

/// Theorem driver: enumerates the applicable critical subset and checks
/// every member. Interval families go through the Kharitonov-edge subset
/// for the Hurwitz region and through the corner-polytope reduction for
/// any other region. Throws CapacityError when the critical count exceeds
/// cfg.critical_budget.
Verdict family_stable(const MatrixFamily& f, const Region& r,
                      const CheckerConfig& cfg);

/// Brute-force falsifier: all vertex-assignment matrices (capped) plus
/// cfg.oracle_samples random members. A stable verdict means only "no
/// counterexample found"; it is one-sided by construction.
Verdict monte_carlo_oracle(const MatrixFamily& f, const Region& r,
                           const CheckerConfig& cfg);

/// det evaluated at z over sampled parameter assignments (plot data).
std::vector<std::complex<double>> value_set(const MatrixFamily& f,
                                            std::complex<double> z, int samples,
                                            std::uint64_t seed);
std::vector<std::complex<double>> value_set(const CriticalFamily& cf,
                                            std::complex<double> z, int samples,
                                            std::uint64_t seed);

/// Depth-0 rectangle enclosure of {det(z; lambda) : lambda in [0,1]^n}
/// as used by the subdivision engine; value_set points land inside it.
ComplexBox value_enclosure(const CriticalFamily& cf, std::complex<double> z);

/// Smallest |det| seen on the region boundary over sampled members and
/// boundary probes (including projections of member roots onto the
/// boundary). Drives the marginal-band classification in compare runs.
double boundary_margin_probe(const MatrixFamily& f, const Region& r,
                             const CheckerConfig& cfg);

/// Re-instantiates an unstable witness and confirms it by direct root
/// computation: a root outside the region or within `tol` of its boundary.
/// A witness whose determinant vanishes identically is confirmed as well
/// (every point is a root).
bool confirm_witness(const MatrixFamily& f, const Witness& w, const Region& r,
                     double tol);

/// Agreement harness between the theorem path and the brute-force oracle.
struct CompareOutcome {
  Verdict check;
  Verdict oracle;
  bool agree = false;
  bool marginal_band = false;  // margin below 10 * epsilon_exclusion
  double margin = 0.0;         // boundary_margin_probe result
};
CompareOutcome compare_family(const MatrixFamily& f, const Region& r,
                              const CheckerConfig& cfg);

}  // namespace polystab
