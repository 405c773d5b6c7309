#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polystab/polynomial.hpp"

namespace polystab {

struct MatrixFamily;

/// Per-cell parameter assignment for extracting one concrete member:
/// a barycentric weight vector for a polytopic cell (nonnegative, summing
/// to 1), a coefficient vector inside the box for an interval cell.
/// Cells are row-major, matching MatrixFamily::entries.
struct SampleParams {
  std::vector<std::vector<double>> cells;
};

/// Concrete square matrix of polynomials, row-major.
struct PolyMatrix {
  int n = 0;
  std::vector<Polynomial> cells;

  PolyMatrix() = default;
  explicit PolyMatrix(int dim) : n(dim), cells(static_cast<size_t>(dim) * dim) {}

  const Polynomial& at(int i, int j) const { return cells[static_cast<size_t>(i) * n + j]; }
  Polynomial& at(int i, int j) { return cells[static_cast<size_t>(i) * n + j]; }
};

/// Determinant by cofactor expansion along the first column, memoized over
/// column subsets. Exact in the ring operations; O(n 2^n) polynomial
/// multiplies.
Polynomial det(const PolyMatrix& m);

/// Fraction-free (Bareiss) elimination determinant; independent route used
/// to cross-check `det`. Exact division by previous pivots is performed
/// with polynomial long division.
Polynomial det_bareiss(const PolyMatrix& m);

/// Signed cofactor (-1)^{i+j} * minor(i,j), so that for every column j,
/// sum_i at(i,j) * cofactor(i,j) = det. For n = 1 the cofactor is 1.
/// Indices are 0-based; out of range throws std::out_of_range.
Polynomial cofactor(const PolyMatrix& m, int i, int j);

/// Outcome of the heuristic degree-invariance check: determinant degrees
/// at every vertex-assignment matrix (capped) plus random interior members.
/// A `constant == true` answer is evidence, not a certificate; the counts
/// say how much evidence.
struct DegreeReport {
  bool constant = false;
  int min_degree = 0;
  int max_degree = 0;
  std::uint64_t vertex_matrices_checked = 0;
  std::uint64_t samples_checked = 0;
  bool vertices_truncated = false;   // vertex grid exceeded the cap; sampled instead
  std::optional<SampleParams> witness;  // a member with deviant degree
  std::optional<int> witness_degree;
};

/// Computes deg(det) at all vertex-assignment matrices (up to `vertex_cap`,
/// random vertex picks beyond that) plus `samples` random interior members.
DegreeReport check_degree_invariant(const MatrixFamily& f, int samples,
                                    std::uint64_t seed,
                                    std::uint64_t vertex_cap = 1u << 17);

}  // namespace polystab
