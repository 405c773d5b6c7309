#pragma once

#include <array>
#include <utility>
#include <variant>
#include <vector>

#include "polystab/poly_matrix.hpp"
#include "polystab/polynomial.hpp"
#include "polystab/rng.hpp"

namespace polystab {

/// Convex hull of a nonempty list of generator polynomials.
struct PolytopicEntry {
  std::vector<Polynomial> generators;
};

/// Coefficient box: coefficient k ranges over [lower[k], upper[k]].
/// The two lists have equal length and lower <= upper elementwise.
struct IntervalEntry {
  std::vector<double> lower;
  std::vector<double> upper;
};

using Entry = std::variant<PolytopicEntry, IntervalEntry>;

/// n x n grid of uncertain entries, row-major.
struct MatrixFamily {
  int n = 0;
  std::vector<Entry> entries;

  const Entry& entry(int i, int j) const { return entries[static_cast<size_t>(i) * n + j]; }
  Entry& entry(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }

  bool all_polytopic() const;
  bool all_interval() const;

  /// Throws std::invalid_argument if the grid is not square n x n or any
  /// entry violates its own invariants.
  void validate() const;
};

/// The four corner polynomials with the period-4 low/high coefficient
/// patterns, in the order f1, f2, f3, f4:
///   f1 = (lo, lo, hi, hi, ...)   f2 = (lo, hi, hi, lo, ...)
///   f3 = (hi, lo, lo, hi, ...)   f4 = (hi, hi, lo, lo, ...)
std::array<Polynomial, 4> kharitonov_vertices(const IntervalEntry& e);

/// The four edges between the corner polynomials along the cycle
/// (f1,f2), (f2,f4), (f4,f3), (f3,f1).
std::array<std::pair<Polynomial, Polynomial>, 4> kharitonov_edges(const IntervalEntry& e);

/// Generator list with exact duplicates removed, order preserved.
std::vector<Polynomial> vertex_set(const PolytopicEntry& e);

/// All unordered pairs of distinct deduplicated generators (empty for a
/// point entry).
std::vector<std::pair<Polynomial, Polynomial>> edge_set(const PolytopicEntry& e);

/// Deduplicated generators plus the indices they had in e.generators.
std::vector<std::pair<Polynomial, int>> vertex_set_indexed(const PolytopicEntry& e);

/// Concrete member of the family at the given parameters. Throws
/// std::invalid_argument when a weight vector leaves the simplex or a
/// coefficient vector leaves its box (tolerance 1e-9).
PolyMatrix sample(const MatrixFamily& f, const SampleParams& params);

/// Generators enumerating all corner polynomials of the coefficient box.
/// Throws CapacityError when the box has more than `max_coefficients`
/// coefficient axes (2^k corners); direct box sampling is the fallback.
PolytopicEntry interval_as_polytopic(const IntervalEntry& e, int max_coefficients = 12);

/// Normalizes a mixed family for the polytopic machinery: every interval
/// entry is replaced by its corner polytope. Polytopic entries pass through.
MatrixFamily as_polytopic(const MatrixFamily& f, int max_coefficients = 12);

/// A uniformly random in-family parameter assignment (symmetric simplex
/// weights for polytopic cells, uniform box points for interval cells).
SampleParams random_params(const MatrixFamily& f, Rng& rng);

/// Number of degrees of freedom: 0 means the family is a single matrix.
int family_dimension(const MatrixFamily& f);

}  // namespace polystab
