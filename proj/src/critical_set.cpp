#include "polystab/critical_set.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polystab/errors.hpp"

namespace polystab {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw CapacityError("critical subset size overflows a 64-bit count",
                        std::numeric_limits<std::uint64_t>::max());
  }
  return a * b;
}

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    throw CapacityError("critical subset size overflows a 64-bit count",
                        std::numeric_limits<std::uint64_t>::max());
  }
  return a + b;
}

// Kharitonov corner indices along the edge cycle (f1,f2),(f2,f4),(f4,f3),(f3,f1).
constexpr int kKharitonovEdgeIdx[4][2] = {{0, 1}, {1, 3}, {3, 2}, {2, 0}};

}  // namespace

std::vector<int> CriticalFamily::permutation() const {
  std::vector<int> perm(static_cast<size_t>(n));
  for (const DesignatedEdge& e : designated) perm[static_cast<size_t>(e.row)] = e.col;
  return perm;
}

PolyMatrix CriticalFamily::instantiate(std::span<const double> lambdas) const {
  if (static_cast<int>(lambdas.size()) != n) {
    throw std::invalid_argument("instantiate: expected one lambda per row");
  }
  PolyMatrix m;
  m.n = n;
  m.cells.resize(static_cast<size_t>(n) * n);
  for (const DesignatedEdge& e : designated) {
    m.cells[static_cast<size_t>(e.row) * n + e.col] =
        convex_combination(e.p0, e.p1, lambdas[static_cast<size_t>(e.row)]);
  }
  for (const FixedCell& c : fixed) {
    m.cells[static_cast<size_t>(c.row) * n + c.col] = c.value;
  }
  return m;
}

CriticalEnumeration::CriticalEnumeration(int n, CriticalKind kind,
                                         std::vector<Cell> cells, bool force_empty)
    : n_(n), kind_(kind), cells_(std::move(cells)) {
  if (n_ < 1) throw std::invalid_argument("critical enumeration needs n >= 1");
  if (n_ > 8) {
    throw CapacityError("matrix dimension too large for critical enumeration",
                        static_cast<std::uint64_t>(n_));
  }
  if (force_empty) {
    block_prefix_.assign(1, 0);
    total_ = 0;
    return;
  }
  std::vector<int> perm(static_cast<size_t>(n_));
  std::iota(perm.begin(), perm.end(), 0);
  block_prefix_.push_back(0);
  do {
    std::uint64_t block = 1;
    for (int r = 0; r < n_; ++r) {
      block = mul_checked(
          block, cells_[static_cast<size_t>(r) * n_ + perm[static_cast<size_t>(r)]]
                     .edges.size());
    }
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < n_; ++c) {
        if (c == perm[static_cast<size_t>(r)]) continue;
        block = mul_checked(block,
                            cells_[static_cast<size_t>(r) * n_ + c].vertices.size());
      }
    }
    perms_.push_back(perm);
    block_prefix_.push_back(add_checked(block_prefix_.back(), block));
  } while (std::next_permutation(perm.begin(), perm.end()));
  total_ = block_prefix_.back();
}

CriticalEnumeration CriticalEnumeration::epsilon_a(const MatrixFamily& f) {
  f.validate();
  if (!f.all_polytopic()) {
    throw std::invalid_argument("epsilon_a requires a polytopic family");
  }
  std::vector<Cell> cells(static_cast<size_t>(f.n) * f.n);
  for (size_t k = 0; k < cells.size(); ++k) {
    const auto& e = std::get<PolytopicEntry>(f.entries[k]);
    Cell& cell = cells[k];
    cell.vertices = vertex_set_indexed(e);
    if (cell.vertices.size() == 1) {
      // Point entry: the degenerate segment keeps the permutation usable.
      const auto& [p, g] = cell.vertices.front();
      cell.edges.push_back(CellEdge{p, p, g, g});
    } else {
      for (size_t i = 0; i < cell.vertices.size(); ++i) {
        for (size_t j = i + 1; j < cell.vertices.size(); ++j) {
          cell.edges.push_back(CellEdge{cell.vertices[i].first, cell.vertices[j].first,
                                        cell.vertices[i].second,
                                        cell.vertices[j].second});
        }
      }
    }
  }
  return CriticalEnumeration(f.n, CriticalKind::kPolytopic, std::move(cells),
                             family_dimension(f) == 0);
}

CriticalEnumeration CriticalEnumeration::remark1(const MatrixFamily& f) {
  f.validate();
  if (!f.all_polytopic()) {
    throw std::invalid_argument("remark1 requires a polytopic family");
  }
  std::vector<Cell> cells(static_cast<size_t>(f.n) * f.n);
  for (size_t k = 0; k < cells.size(); ++k) {
    const auto& e = std::get<PolytopicEntry>(f.entries[k]);
    if (e.generators.size() != 2) {
      throw std::invalid_argument("remark1 requires exactly two generators per entry");
    }
    Cell& cell = cells[k];
    cell.vertices = vertex_set_indexed(e);
    if (cell.vertices.size() == 1) {
      const auto& [p, g] = cell.vertices.front();
      cell.edges.push_back(CellEdge{p, p, g, g});
    } else {
      cell.edges.push_back(CellEdge{e.generators[0], e.generators[1], 0, 1});
    }
  }
  return CriticalEnumeration(f.n, CriticalKind::kRemark1, std::move(cells),
                             family_dimension(f) == 0);
}

CriticalEnumeration CriticalEnumeration::epsilon_b2(const MatrixFamily& f) {
  f.validate();
  if (!f.all_interval()) {
    throw std::invalid_argument("epsilon_b2 requires an interval family");
  }
  std::vector<Cell> cells(static_cast<size_t>(f.n) * f.n);
  for (size_t k = 0; k < cells.size(); ++k) {
    const auto& e = std::get<IntervalEntry>(f.entries[k]);
    auto corners = kharitonov_vertices(e);
    Cell& cell = cells[k];
    for (int i = 0; i < 4; ++i) cell.vertices.emplace_back(corners[static_cast<size_t>(i)], i);
    for (const auto& [a, b] : kKharitonovEdgeIdx) {
      cell.edges.push_back(CellEdge{corners[static_cast<size_t>(a)],
                                    corners[static_cast<size_t>(b)], a, b});
    }
  }
  return CriticalEnumeration(f.n, CriticalKind::kInterval, std::move(cells), false);
}

CriticalFamily CriticalEnumeration::at(std::uint64_t index) const {
  if (index >= total_) throw std::out_of_range("critical family index out of range");
  auto it = std::upper_bound(block_prefix_.begin(), block_prefix_.end(), index);
  size_t p = static_cast<size_t>(it - block_prefix_.begin()) - 1;
  std::uint64_t local = index - block_prefix_[p];
  const std::vector<int>& perm = perms_[p];

  CriticalFamily cf;
  cf.n = n_;
  cf.designated.resize(static_cast<size_t>(n_));
  for (int r = 0; r < n_; ++r) {
    const Cell& cell = cells_[static_cast<size_t>(r) * n_ + perm[static_cast<size_t>(r)]];
    std::uint64_t radix = cell.edges.size();
    const CellEdge& e = cell.edges[static_cast<size_t>(local % radix)];
    local /= radix;
    cf.designated[static_cast<size_t>(r)] =
        DesignatedEdge{r, perm[static_cast<size_t>(r)], e.p0, e.p1, e.g0, e.g1};
  }
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      if (c == perm[static_cast<size_t>(r)]) continue;
      const Cell& cell = cells_[static_cast<size_t>(r) * n_ + c];
      std::uint64_t radix = cell.vertices.size();
      const auto& [poly, gen] = cell.vertices[static_cast<size_t>(local % radix)];
      local /= radix;
      cf.fixed.push_back(FixedCell{r, c, poly, gen});
    }
  }
  return cf;
}

std::uint64_t count_critical(const MatrixFamily& f) {
  if (f.all_interval()) return CriticalEnumeration::epsilon_b2(f).count();
  if (f.all_polytopic()) return CriticalEnumeration::epsilon_a(f).count();
  return CriticalEnumeration::epsilon_a(as_polytopic(f)).count();
}

namespace {

std::vector<double> box_coefficients(const Polynomial& p, const IntervalEntry& e) {
  std::vector<double> c(e.lower.size(), 0.0);
  for (size_t k = 0; k < c.size(); ++k) c[k] = p.coeff(static_cast<int>(k));
  return c;
}

}  // namespace

SampleParams critical_params(const MatrixFamily& f, const CriticalFamily& cf,
                             std::span<const double> lambdas) {
  if (f.n != cf.n) throw std::invalid_argument("critical_params: dimension mismatch");
  if (static_cast<int>(lambdas.size()) != cf.n) {
    throw std::invalid_argument("critical_params: expected one lambda per row");
  }
  SampleParams params;
  params.cells.resize(static_cast<size_t>(f.n) * f.n);
  auto cell_index = [&](int r, int c) { return static_cast<size_t>(r) * f.n + c; };

  for (const FixedCell& c : cf.fixed) {
    const Entry& entry = f.entry(c.row, c.col);
    if (const auto* pe = std::get_if<PolytopicEntry>(&entry)) {
      std::vector<double> w(pe->generators.size(), 0.0);
      w[static_cast<size_t>(c.gen)] = 1.0;
      params.cells[cell_index(c.row, c.col)] = std::move(w);
    } else {
      params.cells[cell_index(c.row, c.col)] =
          box_coefficients(c.value, std::get<IntervalEntry>(entry));
    }
  }
  for (const DesignatedEdge& e : cf.designated) {
    double lambda = lambdas[static_cast<size_t>(e.row)];
    if (lambda < 0.0 || lambda > 1.0) {
      throw std::invalid_argument("critical_params: lambda outside [0, 1]");
    }
    const Entry& entry = f.entry(e.row, e.col);
    if (const auto* pe = std::get_if<PolytopicEntry>(&entry)) {
      std::vector<double> w(pe->generators.size(), 0.0);
      w[static_cast<size_t>(e.gen0)] += 1.0 - lambda;
      w[static_cast<size_t>(e.gen1)] += lambda;
      params.cells[cell_index(e.row, e.col)] = std::move(w);
    } else {
      params.cells[cell_index(e.row, e.col)] = box_coefficients(
          convex_combination(e.p0, e.p1, lambda), std::get<IntervalEntry>(entry));
    }
  }
  return params;
}

}  // namespace polystab
