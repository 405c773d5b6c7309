#include "polystab/poly_matrix.hpp"

#include <stdexcept>
#include <unordered_map>

#include "polystab/family.hpp"
#include "polystab/rng.hpp"

namespace polystab {

namespace {

// Rows are consumed top-down, so the set of still-available columns
// determines the submatrix; that mask is the memo key.
class CofactorDet {
 public:
  explicit CofactorDet(const PolyMatrix& m) : m_(m) {}

  Polynomial run() {
    const std::uint32_t full = (m_.n >= 32) ? 0 : ((1u << m_.n) - 1u);
    if (m_.n >= 32) throw std::invalid_argument("det: dimension too large");
    return expand(full);
  }

 private:
  Polynomial expand(std::uint32_t mask) {
    const int row = m_.n - __builtin_popcount(mask);
    if (mask == 0) return Polynomial::constant(1.0);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    Polynomial acc;
    int pos = 0;
    for (int j = 0; j < m_.n; ++j) {
      if (!(mask & (1u << j))) continue;
      const Polynomial& cell = m_.at(row, j);
      if (!cell.is_zero()) {
        Polynomial term = cell * expand(mask & ~(1u << j));
        acc = (pos % 2 == 0) ? acc + term : acc - term;
      }
      ++pos;
    }
    memo_.emplace(mask, acc);
    return acc;
  }

  const PolyMatrix& m_;
  std::unordered_map<std::uint32_t, Polynomial> memo_;
};

}  // namespace

Polynomial det(const PolyMatrix& m) {
  if (m.n < 1) throw std::invalid_argument("det: empty matrix");
  return CofactorDet(m).run();
}

Polynomial det_bareiss(const PolyMatrix& m) {
  if (m.n < 1) throw std::invalid_argument("det_bareiss: empty matrix");
  const int n = m.n;
  PolyMatrix w = m;
  Polynomial prev = Polynomial::constant(1.0);
  double sign = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    if (w.at(k, k).is_zero()) {
      int pivot_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (!w.at(r, k).is_zero()) {
          pivot_row = r;
          break;
        }
      if (pivot_row < 0) return Polynomial{};  // whole column zero
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(pivot_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Polynomial numer = w.at(k, k) * w.at(i, j) - w.at(i, k) * w.at(k, j);
        w.at(i, j) = numer.is_zero() ? Polynomial{} : divide_exact(numer, prev);
      }
      w.at(i, k) = Polynomial{};
    }
    prev = w.at(k, k);
  }
  return sign * w.at(n - 1, n - 1);
}

Polynomial cofactor(const PolyMatrix& m, int i, int j) {
  if (i < 0 || j < 0 || i >= m.n || j >= m.n)
    throw std::out_of_range("cofactor: index out of range");
  if (m.n == 1) return Polynomial::constant(1.0);
  PolyMatrix sub(m.n - 1);
  for (int r = 0, rr = 0; r < m.n; ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < m.n; ++c) {
      if (c == j) continue;
      sub.at(rr, cc) = m.at(r, c);
      ++cc;
    }
    ++rr;
  }
  Polynomial d = det(sub);
  return ((i + j) % 2 == 0) ? d : -d;
}

namespace {

// Per-cell vertex assignments in SampleParams form.
std::vector<std::vector<std::vector<double>>> vertex_param_lists(const MatrixFamily& f) {
  std::vector<std::vector<std::vector<double>>> lists;
  lists.reserve(f.entries.size());
  for (const Entry& e : f.entries) {
    std::vector<std::vector<double>> cell;
    if (const auto* poly = std::get_if<PolytopicEntry>(&e)) {
      for (const auto& [p, orig] : vertex_set_indexed(*poly)) {
        std::vector<double> w(poly->generators.size(), 0.0);
        w[static_cast<size_t>(orig)] = 1.0;
        cell.push_back(std::move(w));
      }
    } else {
      const auto& box = std::get<IntervalEntry>(e);
      const size_t len = box.lower.size();
      if (len <= 20) {
        const std::uint64_t corners = static_cast<std::uint64_t>(1) << len;
        for (std::uint64_t mask = 0; mask < corners; ++mask) {
          std::vector<double> c(len);
          for (size_t k = 0; k < len; ++k)
            c[k] = (mask >> k) & 1 ? box.upper[k] : box.lower[k];
          // Degenerate axes produce duplicate corners; keep the first only.
          bool dup = false;
          for (size_t k = 0; k < len && !dup; ++k)
            dup = ((mask >> k) & 1) && box.upper[k] == box.lower[k];
          if (!dup) cell.push_back(std::move(c));
        }
      } else {
        // Too many corners to enumerate; the caller falls back to sampling.
        cell.push_back(box.lower);
        cell.push_back(box.upper);
      }
    }
    lists.push_back(std::move(cell));
  }
  return lists;
}

int det_degree(const MatrixFamily& f, const SampleParams& params) {
  return det(sample(f, params)).degree();
}

}  // namespace

DegreeReport check_degree_invariant(const MatrixFamily& f, int samples,
                                    std::uint64_t seed, std::uint64_t vertex_cap) {
  f.validate();
  DegreeReport report;
  const auto lists = vertex_param_lists(f);

  std::uint64_t total = 1;
  bool overflow = false;
  for (const auto& cell : lists) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(cell.size()), &total)) {
      overflow = true;
      break;
    }
  }
  report.vertices_truncated = overflow || total > vertex_cap;

  bool first = true;
  SampleParams argmin;
  auto record = [&](const SampleParams& params, int deg) {
    if (first) {
      report.min_degree = report.max_degree = deg;
      argmin = params;
      first = false;
      return;
    }
    if (deg < report.min_degree) {
      report.min_degree = deg;
      argmin = params;
    }
    report.max_degree = std::max(report.max_degree, deg);
  };

  SampleParams params;
  params.cells.resize(lists.size());
  if (!report.vertices_truncated) {
    // Odometer over the per-cell vertex lists.
    std::vector<size_t> idx(lists.size(), 0);
    while (true) {
      for (size_t c = 0; c < lists.size(); ++c) params.cells[c] = lists[c][idx[c]];
      record(params, det_degree(f, params));
      ++report.vertex_matrices_checked;
      size_t c = 0;
      while (c < lists.size() && ++idx[c] == lists[c].size()) idx[c++] = 0;
      if (c == lists.size()) break;
    }
  } else {
    Rng rng = Rng::stream(seed, 0x76657274);  // vertex-pick stream
    for (std::uint64_t k = 0; k < vertex_cap; ++k) {
      for (size_t c = 0; c < lists.size(); ++c)
        params.cells[c] = lists[c][rng.below(lists[c].size())];
      record(params, det_degree(f, params));
      ++report.vertex_matrices_checked;
    }
  }

  Rng rng = Rng::stream(seed, 0x696e7472);  // interior-sample stream
  for (int k = 0; k < samples; ++k) {
    SampleParams interior = random_params(f, rng);
    record(interior, det_degree(f, interior));
    ++report.samples_checked;
  }

  report.constant = !first && report.min_degree == report.max_degree;
  if (!report.constant) {
    // The witness is the member whose determinant degree drops below the
    // generic (maximal) degree.
    report.witness = std::move(argmin);
    report.witness_degree = report.min_degree;
  }
  return report;
}

}  // namespace polystab
