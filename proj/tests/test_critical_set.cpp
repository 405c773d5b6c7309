#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "polystab/critical_set.hpp"
#include "polystab/errors.hpp"
#include "polystab/rng.hpp"
#include "test_support.hpp"

using namespace polystab;

namespace {

// All entries polytopic with m generators of the form c + s, distinct c.
MatrixFamily uniform_polytopic(int n, int m) {
  MatrixFamily f;
  f.n = n;
  for (int cell = 0; cell < n * n; ++cell) {
    PolytopicEntry e;
    for (int g = 0; g < m; ++g)
      e.generators.push_back(Polynomial{1.0 + cell + 10.0 * g, 1.0});
    f.entries.push_back(e);
  }
  return f;
}

MatrixFamily uniform_interval(int n) {
  MatrixFamily f;
  f.n = n;
  for (int cell = 0; cell < n * n; ++cell) {
    IntervalEntry e;
    e.lower = {1.0 + cell, 1.0, 2.0};
    e.upper = {2.0 + cell, 3.0, 4.0};
    f.entries.push_back(e);
  }
  return f;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= static_cast<std::uint64_t>(k);
  return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint64_t closed_form_polytopic(int n, int m) {
  std::uint64_t pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  return factorial(n) * ipow(pairs, n) * ipow(static_cast<std::uint64_t>(m), n * (n - 1));
}

std::uint64_t closed_form_interval(int n) {
  return factorial(n) * ipow(4, n) * ipow(4, n * (n - 1));
}

// Canonical text key of a critical family, for duplicate detection and
// set comparisons across enumerators.
std::string family_key(const CriticalFamily& cf) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& d : cf.designated) {
    os << "D" << d.row << "," << d.col << ":";
    for (double c : d.p0.coeffs()) os << c << " ";
    os << "|";
    for (double c : d.p1.coeffs()) os << c << " ";
    os << ";";
  }
  for (const auto& x : cf.fixed) {
    os << "F" << x.row << "," << x.col << ":";
    for (double c : x.value.coeffs()) os << c << " ";
    os << ";";
  }
  return os.str();
}

}  // namespace

TEST_CASE("counts match the closed forms") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 2; m <= 3; ++m) {
      MatrixFamily f = uniform_polytopic(n, m);
      CHECK(count_critical(f) == closed_form_polytopic(n, m));
      CHECK(CriticalEnumeration::epsilon_a(f).count() == closed_form_polytopic(n, m));
    }
    MatrixFamily g = uniform_interval(n);
    CHECK(count_critical(g) == closed_form_interval(n));
    CHECK(CriticalEnumeration::epsilon_b2(g).count() == closed_form_interval(n));
  }
  CHECK(closed_form_polytopic(1, 2) == 1);
  CHECK(closed_form_polytopic(2, 2) == 8);
  CHECK(closed_form_polytopic(2, 3) == 162);
  CHECK(closed_form_interval(1) == 4);
  CHECK(closed_form_interval(2) == 512);
  CHECK(closed_form_interval(3) == 1572864);
}

TEST_CASE("enumeration is exhaustive and duplicate-free") {
  MatrixFamily f = uniform_polytopic(2, 3);
  CriticalEnumeration e = CriticalEnumeration::epsilon_a(f);
  REQUIRE(e.count() == 162);
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < e.count(); ++i) seen.insert(family_key(e.at(i)));
  CHECK(seen.size() == 162);

  MatrixFamily g = uniform_interval(2);
  CriticalEnumeration b = CriticalEnumeration::epsilon_b2(g);
  REQUIRE(b.count() == 512);
  std::set<std::string> seen_b;
  for (std::uint64_t i = 0; i < b.count(); ++i) seen_b.insert(family_key(b.at(i)));
  CHECK(seen_b.size() == 512);

  CHECK_THROWS_AS(e.at(162), std::out_of_range);
}

TEST_CASE("designated columns always form a permutation") {
  MatrixFamily f = uniform_polytopic(3, 2);
  CriticalEnumeration e = CriticalEnumeration::epsilon_a(f);
  for (std::uint64_t i = 0; i < e.count(); ++i) {
    CriticalFamily cf = e.at(i);
    std::vector<int> cols = cf.permutation();
    std::sort(cols.begin(), cols.end());
    for (int k = 0; k < cf.n; ++k) CHECK(cols[static_cast<size_t>(k)] == k);
    // Designated cells and fixed cells tile the grid exactly.
    CHECK(cf.fixed.size() == static_cast<size_t>(cf.n) * (cf.n - 1));
  }
}

TEST_CASE("every instantiation lies inside the source family") {
  Rng rng(51);
  MatrixFamily fams[] = {uniform_polytopic(2, 3), uniform_interval(2)};
  for (const MatrixFamily& f : fams) {
    CriticalEnumeration e = f.all_interval() ? CriticalEnumeration::epsilon_b2(f)
                                             : CriticalEnumeration::epsilon_a(f);
    for (int trial = 0; trial < 120; ++trial) {
      CriticalFamily cf = e.at(rng.below(e.count()));
      std::vector<double> ls(static_cast<size_t>(cf.n));
      for (double& l : ls) l = rng.uniform();
      PolyMatrix direct = cf.instantiate(ls);
      // critical_params must reproduce the same matrix through the family's
      // own sampling rules, which also validates membership.
      SampleParams sp = critical_params(f, cf, ls);
      PolyMatrix via_family = sample(f, sp);
      for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j)
          CHECK(direct.at(i, j).approx_equal(via_family.at(i, j), 1e-9));
    }
  }
}

TEST_CASE("remark 1 path emits the same set as the general enumerator") {
  MatrixFamily f = uniform_polytopic(2, 2);
  CriticalEnumeration gen = CriticalEnumeration::epsilon_a(f);
  CriticalEnumeration fast = CriticalEnumeration::remark1(f);
  CHECK(gen.kind() == CriticalKind::kPolytopic);
  CHECK(fast.kind() == CriticalKind::kRemark1);
  REQUIRE(gen.count() == fast.count());
  std::set<std::string> a, b;
  for (std::uint64_t i = 0; i < gen.count(); ++i) {
    a.insert(family_key(gen.at(i)));
    b.insert(family_key(fast.at(i)));
  }
  CHECK(a == b);

  MatrixFamily g = uniform_polytopic(2, 3);
  CHECK_THROWS_AS(CriticalEnumeration::remark1(g), std::invalid_argument);
}

TEST_CASE("interval designations use Kharitonov vertices and edges") {
  MatrixFamily f = uniform_interval(2);
  CriticalEnumeration e = CriticalEnumeration::epsilon_b2(f);
  Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    CriticalFamily cf = e.at(rng.below(e.count()));
    for (const auto& d : cf.designated) {
      const auto& box = std::get<IntervalEntry>(f.entry(d.row, d.col));
      auto verts = kharitonov_vertices(box);
      CHECK(std::count(verts.begin(), verts.end(), d.p0) == 1);
      CHECK(std::count(verts.begin(), verts.end(), d.p1) == 1);
    }
    for (const auto& x : cf.fixed) {
      const auto& box = std::get<IntervalEntry>(f.entry(x.row, x.col));
      auto verts = kharitonov_vertices(box);
      CHECK(std::count(verts.begin(), verts.end(), x.value) == 1);
    }
  }
}

TEST_CASE("degenerate boxes collapse to a single matrix everywhere") {
  MatrixFamily f;
  f.n = 2;
  for (int cell = 0; cell < 4; ++cell) {
    IntervalEntry e;
    e.lower = {1.0 + cell, 1.0};
    e.upper = e.lower;
    f.entries.push_back(e);
  }
  CriticalEnumeration e = CriticalEnumeration::epsilon_b2(f);
  std::vector<double> mid{0.3, 0.8};
  PolyMatrix first = e.at(0).instantiate(mid);
  for (std::uint64_t i = 1; i < e.count(); ++i) {
    PolyMatrix m = e.at(i).instantiate(mid);
    for (size_t c = 0; c < m.cells.size(); ++c)
      CHECK(m.cells[c].approx_equal(first.cells[c], 1e-12));
  }
}

TEST_CASE("families with no uncertainty have an empty critical set") {
  MatrixFamily f;
  f.n = 1;
  f.entries = {PolytopicEntry{{Polynomial{1, 1}}}};
  CHECK(count_critical(f) == 0);
  CHECK(CriticalEnumeration::epsilon_a(f).count() == 0);
}

TEST_CASE("point entries do not lose permutations") {
  // One diagonal entry is a point: the permutation that designates it must
  // still appear, carried by a degenerate edge.
  MatrixFamily f;
  f.n = 2;
  f.entries = {
      PolytopicEntry{{Polynomial{1, 1}}},  // point
      PolytopicEntry{{Polynomial{0.1}, Polynomial{0.2}}},
      PolytopicEntry{{Polynomial{-0.1}, Polynomial{0.3}}},
      PolytopicEntry{{Polynomial{2, 1}, Polynomial{3, 1}}},
  };
  CriticalEnumeration e = CriticalEnumeration::epsilon_a(f);
  bool identity_seen = false, swap_seen = false;
  for (std::uint64_t i = 0; i < e.count(); ++i) {
    std::vector<int> p = e.at(i).permutation();
    if (p == std::vector<int>{0, 1}) identity_seen = true;
    if (p == std::vector<int>{1, 0}) swap_seen = true;
  }
  CHECK(identity_seen);
  CHECK(swap_seen);
}

TEST_CASE("random access is consistent with sequential enumeration") {
  MatrixFamily f = uniform_polytopic(2, 3);
  CriticalEnumeration e = CriticalEnumeration::epsilon_a(f);
  std::vector<std::string> sequential;
  for (std::uint64_t i = 0; i < e.count(); ++i) sequential.push_back(family_key(e.at(i)));
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t i = rng.below(e.count());
    CHECK(family_key(e.at(i)) == sequential[static_cast<size_t>(i)]);
  }
}

TEST_CASE("capacity guards") {
  CHECK_THROWS_AS(CriticalEnumeration::epsilon_a(uniform_polytopic(9, 2)), CapacityError);

  // 8x8 with 16 generators per entry overflows 64-bit counting.
  MatrixFamily big = uniform_polytopic(8, 16);
  CHECK_THROWS_AS(count_critical(big), CapacityError);
}

TEST_CASE("critical_params validates lambda range") {
  MatrixFamily f = uniform_polytopic(1, 2);
  CriticalEnumeration e = CriticalEnumeration::epsilon_a(f);
  CriticalFamily cf = e.at(0);
  std::vector<double> bad{1.5};
  CHECK_THROWS_AS(critical_params(f, cf, bad), std::invalid_argument);
}
