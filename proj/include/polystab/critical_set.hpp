#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polystab/family.hpp"
#include "polystab/poly_matrix.hpp"
#include "polystab/polynomial.hpp"

namespace polystab {

/// One edge-designated entry: the cell (row, col) sweeps the segment
/// (1-lambda)*p0 + lambda*p1 with its own lambda in [0,1]. gen0/gen1 are
/// the indices of p0/p1 in the source entry (generator indices for a
/// polytopic entry, Kharitonov corner indices 0..3 for an interval entry).
struct DesignatedEdge {
  int row = 0, col = 0;
  Polynomial p0, p1;
  int gen0 = 0, gen1 = 0;
};

/// One vertex-pinned entry of a critical family.
struct FixedCell {
  int row = 0, col = 0;
  Polynomial value;
  int gen = 0;
};

/// A member of the critical subset: per row exactly one designated edge
/// entry, the designated columns forming a permutation, every other cell
/// pinned to a vertex. The family's free parameters are the n per-row
/// lambdas.
struct CriticalFamily {
  int n = 0;
  std::vector<DesignatedEdge> designated;  // indexed by row
  std::vector<FixedCell> fixed;            // row-major over the other cells

  /// Designated column per row.
  std::vector<int> permutation() const;

  /// Concrete matrix at the given per-row lambdas (size n, each in [0,1]).
  PolyMatrix instantiate(std::span<const double> lambdas) const;
};

enum class CriticalKind { kPolytopic, kRemark1, kInterval };

/// Lazy, duplicate-free, randomly-addressable enumeration of a critical
/// subset. Elements are independent, so any index partition can be consumed
/// in parallel; `at` is pure.
///
/// Index layout: permutations in lexicographic order; within a permutation
/// block, mixed-radix digits run least-significant-first over the per-row
/// edge choices (row 0 first), then over the vertex choices of the
/// remaining cells in row-major order.
class CriticalEnumeration {
 public:
  /// General polytopic enumeration: per designated cell all unordered pairs
  /// of distinct vertices; per other cell its vertex set. A point entry
  /// (one distinct generator) designates as the degenerate pair (p, p) so
  /// no permutation is lost. A family with no uncertainty at all counts 0
  /// (it is a single matrix; callers check it directly).
  static CriticalEnumeration epsilon_a(const MatrixFamily& f);

  /// Two-generator fast path: each entry {p0, p1} designates the single
  /// segment p0 -> p1 and pins to lambda in {0,1} elsewhere. Requires every
  /// entry to have exactly two generators; output set is identical to
  /// epsilon_a on the same family.
  static CriticalEnumeration remark1(const MatrixFamily& f);

  /// Interval enumeration: designated cells range over the four Kharitonov
  /// edges, other cells over the four Kharitonov vertices.
  static CriticalEnumeration epsilon_b2(const MatrixFamily& f);

  std::uint64_t count() const { return total_; }
  CriticalFamily at(std::uint64_t index) const;
  CriticalKind kind() const { return kind_; }
  int dimension() const { return n_; }

 private:
  struct CellEdge {
    Polynomial p0, p1;
    int g0 = 0, g1 = 0;
  };
  struct Cell {
    std::vector<std::pair<Polynomial, int>> vertices;
    std::vector<CellEdge> edges;
  };

  CriticalEnumeration(int n, CriticalKind kind, std::vector<Cell> cells,
                      bool force_empty);

  int n_ = 0;
  CriticalKind kind_ = CriticalKind::kPolytopic;
  std::vector<Cell> cells_;                   // row-major n*n
  std::vector<std::vector<int>> perms_;       // lexicographic
  std::vector<std::uint64_t> block_prefix_;   // size perms+1
  std::uint64_t total_ = 0;
};

/// Closed-form size of the applicable critical subset (Kharitonov-based for
/// an all-interval family, polytopic otherwise; mixed families are
/// normalized first). Throws CapacityError if the count overflows.
std::uint64_t count_critical(const MatrixFamily& f);

/// Family-level parameter assignment reproducing cf.instantiate(lambdas)
/// through `sample`, for witness reporting and independent re-checks.
SampleParams critical_params(const MatrixFamily& f, const CriticalFamily& cf,
                             std::span<const double> lambdas);

}  // namespace polystab
