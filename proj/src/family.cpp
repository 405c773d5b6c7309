#include "polystab/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polystab/errors.hpp"

namespace polystab {

namespace {

void validate_entry(const PolytopicEntry& e) {
  if (e.generators.empty())
    throw std::invalid_argument("polytopic entry needs at least one generator");
}

void validate_entry(const IntervalEntry& e) {
  if (e.lower.empty() || e.lower.size() != e.upper.size())
    throw std::invalid_argument("interval entry needs equal-length nonempty bounds");
  for (size_t k = 0; k < e.lower.size(); ++k)
    if (!(e.lower[k] <= e.upper[k]))
      throw std::invalid_argument("interval entry has lower > upper");
}

}  // namespace

bool MatrixFamily::all_polytopic() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) {
    return std::holds_alternative<PolytopicEntry>(e);
  });
}

bool MatrixFamily::all_interval() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) {
    return std::holds_alternative<IntervalEntry>(e);
  });
}

void MatrixFamily::validate() const {
  if (n < 1) throw std::invalid_argument("matrix family dimension must be >= 1");
  if (entries.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("matrix family grid is not n x n");
  for (const Entry& e : entries)
    std::visit([](const auto& cell) { validate_entry(cell); }, e);
}

std::array<Polynomial, 4> kharitonov_vertices(const IntervalEntry& e) {
  validate_entry(e);
  const size_t len = e.lower.size();
  // Period-4 selection patterns over the coefficient index; 1 picks upper.
  static constexpr bool kHi[4][4] = {
      {false, false, true, true},   // f1
      {false, true, true, false},   // f2
      {true, false, false, true},   // f3
      {true, true, false, false},   // f4
  };
  std::array<Polynomial, 4> out;
  for (int v = 0; v < 4; ++v) {
    std::vector<double> c(len);
    for (size_t k = 0; k < len; ++k)
      c[k] = kHi[v][k % 4] ? e.upper[k] : e.lower[k];
    out[static_cast<size_t>(v)] = Polynomial{std::move(c)};
  }
  return out;
}

std::array<std::pair<Polynomial, Polynomial>, 4> kharitonov_edges(const IntervalEntry& e) {
  const auto f = kharitonov_vertices(e);
  return {{{f[0], f[1]}, {f[1], f[3]}, {f[3], f[2]}, {f[2], f[0]}}};
}

std::vector<std::pair<Polynomial, int>> vertex_set_indexed(const PolytopicEntry& e) {
  validate_entry(e);
  std::vector<std::pair<Polynomial, int>> out;
  for (size_t k = 0; k < e.generators.size(); ++k) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& seen) {
      return seen.first == e.generators[k];
    });
    if (!dup) out.emplace_back(e.generators[k], static_cast<int>(k));
  }
  return out;
}

std::vector<Polynomial> vertex_set(const PolytopicEntry& e) {
  std::vector<Polynomial> out;
  for (auto& [p, idx] : vertex_set_indexed(e)) out.push_back(std::move(p));
  return out;
}

std::vector<std::pair<Polynomial, Polynomial>> edge_set(const PolytopicEntry& e) {
  const auto verts = vertex_set(e);
  std::vector<std::pair<Polynomial, Polynomial>> out;
  for (size_t s = 0; s < verts.size(); ++s)
    for (size_t t = s + 1; t < verts.size(); ++t) out.emplace_back(verts[s], verts[t]);
  return out;
}

namespace {

Polynomial sample_cell(const PolytopicEntry& e, const std::vector<double>& weights) {
  constexpr double kTol = 1e-9;
  if (weights.size() != e.generators.size())
    throw std::invalid_argument("sample: weight count does not match generator count");
  double total = 0.0;
  for (double w : weights) {
    if (w < -kTol) throw std::invalid_argument("sample: negative barycentric weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kTol)
    throw std::invalid_argument("sample: barycentric weights must sum to 1");
  Polynomial acc;
  for (size_t k = 0; k < weights.size(); ++k) acc = acc + weights[k] * e.generators[k];
  return acc;
}

Polynomial sample_cell(const IntervalEntry& e, const std::vector<double>& coeffs) {
  constexpr double kTol = 1e-9;
  if (coeffs.size() != e.lower.size())
    throw std::invalid_argument("sample: coefficient count does not match box");
  for (size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] < e.lower[k] - kTol || coeffs[k] > e.upper[k] + kTol)
      throw std::invalid_argument("sample: coefficient outside its interval");
  return Polynomial{coeffs};
}

}  // namespace

PolyMatrix sample(const MatrixFamily& f, const SampleParams& params) {
  if (params.cells.size() != f.entries.size())
    throw std::invalid_argument("sample: parameter count does not match grid");
  PolyMatrix m(f.n);
  for (size_t idx = 0; idx < f.entries.size(); ++idx) {
    m.cells[idx] = std::visit(
        [&](const auto& cell) { return sample_cell(cell, params.cells[idx]); },
        f.entries[idx]);
  }
  return m;
}

PolytopicEntry interval_as_polytopic(const IntervalEntry& e, int max_coefficients) {
  validate_entry(e);
  const size_t len = e.lower.size();
  if (len > static_cast<size_t>(max_coefficients))
    throw CapacityError(
        "interval_as_polytopic: coefficient box too large to enumerate corners; "
        "sample the box directly",
        static_cast<std::uint64_t>(1) << len);
  PolytopicEntry out;
  std::vector<double> c(len);
  const std::uint64_t corners = static_cast<std::uint64_t>(1) << len;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    for (size_t k = 0; k < len; ++k)
      c[k] = (mask >> k) & 1 ? e.upper[k] : e.lower[k];
    Polynomial p{c};
    const bool dup = std::any_of(out.generators.begin(), out.generators.end(),
                                 [&](const Polynomial& q) { return q == p; });
    if (!dup) out.generators.push_back(std::move(p));
  }
  return out;
}

MatrixFamily as_polytopic(const MatrixFamily& f, int max_coefficients) {
  MatrixFamily out;
  out.n = f.n;
  out.entries.reserve(f.entries.size());
  for (const Entry& e : f.entries) {
    if (const auto* box = std::get_if<IntervalEntry>(&e))
      out.entries.emplace_back(interval_as_polytopic(*box, max_coefficients));
    else
      out.entries.push_back(e);
  }
  return out;
}

SampleParams random_params(const MatrixFamily& f, Rng& rng) {
  SampleParams params;
  params.cells.reserve(f.entries.size());
  for (const Entry& e : f.entries) {
    if (const auto* poly = std::get_if<PolytopicEntry>(&e)) {
      params.cells.push_back(rng.simplex(static_cast<int>(poly->generators.size())));
    } else {
      const auto& box = std::get<IntervalEntry>(e);
      std::vector<double> c(box.lower.size());
      for (size_t k = 0; k < c.size(); ++k)
        c[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * rng.uniform();
      params.cells.push_back(std::move(c));
    }
  }
  return params;
}

int family_dimension(const MatrixFamily& f) {
  int dof = 0;
  for (const Entry& e : f.entries) {
    if (const auto* poly = std::get_if<PolytopicEntry>(&e)) {
      dof += static_cast<int>(vertex_set(*poly).size()) - 1;
    } else {
      const auto& box = std::get<IntervalEntry>(e);
      for (size_t k = 0; k < box.lower.size(); ++k)
        if (box.upper[k] > box.lower[k]) ++dof;
    }
  }
  return dof;
}

}  // namespace polystab
