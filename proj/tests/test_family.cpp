#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "polystab/errors.hpp"
#include "polystab/family.hpp"
#include "polystab/rng.hpp"
#include "test_support.hpp"

using namespace polystab;

namespace {

IntervalEntry random_box(Rng& rng, int max_coeffs = 5) {
  int k = rng.uniform_int(1, max_coeffs);
  IntervalEntry e;
  e.lower.resize(static_cast<size_t>(k));
  e.upper.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    e.lower[static_cast<size_t>(i)] = std::min(a, b);
    e.upper[static_cast<size_t>(i)] = std::max(a, b);
  }
  return e;
}

bool is_corner_of(const Polynomial& p, const IntervalEntry& e) {
  for (size_t k = 0; k < e.lower.size(); ++k) {
    double c = p.coeff(static_cast<int>(k));
    if (c != e.lower[k] && c != e.upper[k]) return false;
  }
  return p.degree() < static_cast<int>(e.lower.size());
}

}  // namespace

TEST_CASE("kharitonov vertex patterns") {
  IntervalEntry e{{1, 3, 5, 7}, {2, 4, 6, 8}};
  auto f = kharitonov_vertices(e);
  CHECK(f[0] == Polynomial{1, 3, 6, 8});  // (lo, lo, hi, hi)
  CHECK(f[1] == Polynomial{1, 4, 6, 7});  // (lo, hi, hi, lo)
  CHECK(f[2] == Polynomial{2, 3, 5, 8});  // (hi, lo, lo, hi)
  CHECK(f[3] == Polynomial{2, 4, 5, 7});  // (hi, hi, lo, lo)
}

TEST_CASE("kharitonov vertices of a degenerate box collapse") {
  IntervalEntry e{{2, -1, 4}, {2, -1, 4}};
  auto f = kharitonov_vertices(e);
  for (const auto& p : f) CHECK(p == Polynomial{2, -1, 4});
}

TEST_CASE("kharitonov vertices are corners of the box") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    IntervalEntry e = random_box(rng);
    if (e.upper.back() == 0.0 && e.lower.back() == 0.0) continue;
    for (const auto& p : kharitonov_vertices(e)) {
      bool corner = true;
      for (size_t k = 0; k < e.lower.size(); ++k) {
        double c = p.coeff(static_cast<int>(k));
        corner = corner && (c == e.lower[k] || c == e.upper[k]);
      }
      CHECK(corner);
    }
  }
}

TEST_CASE("kharitonov edges follow the cycle") {
  IntervalEntry e{{1, 3, 5, 7}, {2, 4, 6, 8}};
  auto f = kharitonov_vertices(e);
  auto edges = kharitonov_edges(e);
  REQUIRE(edges.size() == 4);
  CHECK(edges[0].first == f[0]);
  CHECK(edges[0].second == f[1]);
  CHECK(edges[1].first == f[1]);
  CHECK(edges[1].second == f[3]);
  CHECK(edges[2].first == f[3]);
  CHECK(edges[2].second == f[2]);
  CHECK(edges[3].first == f[2]);
  CHECK(edges[3].second == f[0]);

  // Each vertex appears exactly twice across the endpoint multiset.
  for (const auto& v : f) {
    int uses = 0;
    for (const auto& [a, b] : edges) uses += (a == v) + (b == v);
    CHECK(uses == 2);
  }
}

TEST_CASE("vertex and edge sets deduplicate") {
  Polynomial p{1, 1}, q{2, 1}, r{3, 1};
  CHECK(vertex_set(PolytopicEntry{{p, q}}).size() == 2);
  CHECK(vertex_set(PolytopicEntry{{p, p}}).size() == 1);
  CHECK(vertex_set(PolytopicEntry{{p, q, r}}).size() == 3);
  CHECK(edge_set(PolytopicEntry{{p, q}}).size() == 1);
  CHECK(edge_set(PolytopicEntry{{p, q, r}}).size() == 3);
  CHECK(edge_set(PolytopicEntry{{p}}).empty());
  CHECK(edge_set(PolytopicEntry{{p, p, p}}).empty());
}

TEST_CASE("sampling at vertex assignments reproduces generators") {
  MatrixFamily f;
  f.n = 2;
  f.entries = {
      PolytopicEntry{{Polynomial{1, 1}, Polynomial{2, 1}}},
      PolytopicEntry{{Polynomial{0.5}}},
      IntervalEntry{{-1, 1}, {1, 1}},
      PolytopicEntry{{Polynomial{3, 1}, Polynomial{4, 1}}},
  };
  f.validate();

  SampleParams at_first;
  at_first.cells = {{1.0, 0.0}, {1.0}, {-1.0, 1.0}, {1.0, 0.0}};
  PolyMatrix m = sample(f, at_first);
  CHECK(m.at(0, 0) == Polynomial{1, 1});
  CHECK(m.at(0, 1) == Polynomial{0.5});
  CHECK(m.at(1, 0) == Polynomial{-1, 1});
  CHECK(m.at(1, 1) == Polynomial{3, 1});

  SampleParams mid;
  mid.cells = {{0.5, 0.5}, {1.0}, {0.0, 1.0}, {0.0, 1.0}};
  PolyMatrix mm = sample(f, mid);
  CHECK(mm.at(0, 0).approx_equal(Polynomial{1.5, 1}, 1e-12));

  SampleParams bad = at_first;
  bad.cells[0] = {0.7, 0.7};  // leaves the simplex
  CHECK_THROWS_AS(sample(f, bad), std::invalid_argument);
  bad = at_first;
  bad.cells[2] = {5.0, 1.0};  // leaves the box
  CHECK_THROWS_AS(sample(f, bad), std::invalid_argument);
}

TEST_CASE("interval entries expand to corner polytopes") {
  auto gens = [](const PolytopicEntry& e) -> const std::vector<Polynomial>& {
    return e.generators;
  };

  PolytopicEntry c1 = interval_as_polytopic(IntervalEntry{{0}, {1}});
  CHECK(gens(c1).size() == 2);
  CHECK(std::count(gens(c1).begin(), gens(c1).end(), Polynomial{}) == 1);
  CHECK(std::count(gens(c1).begin(), gens(c1).end(), Polynomial{1}) == 1);

  PolytopicEntry c2 = interval_as_polytopic(IntervalEntry{{0, 2}, {1, 3}});
  CHECK(gens(c2).size() == 4);

  PolytopicEntry c3 = interval_as_polytopic(IntervalEntry{{1, 2}, {1, 2}});
  CHECK(gens(c3).size() == 1);

  IntervalEntry too_big;
  too_big.lower.assign(13, 0.0);
  too_big.upper.assign(13, 1.0);
  CHECK_THROWS_AS(interval_as_polytopic(too_big), CapacityError);
}

TEST_CASE("kharitonov vertices appear among the box corners") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    IntervalEntry e = random_box(rng, 4);
    auto corners = interval_as_polytopic(e).generators;
    for (const auto& v : kharitonov_vertices(e)) {
      CHECK(std::count(corners.begin(), corners.end(), v) >= 1);
    }
  }
}

TEST_CASE("as_polytopic normalizes mixed families") {
  MatrixFamily f;
  f.n = 1;
  f.entries = {IntervalEntry{{0, 2}, {1, 3}}};
  MatrixFamily g = as_polytopic(f);
  CHECK(g.all_polytopic());
  CHECK(std::get<PolytopicEntry>(g.entries[0]).generators.size() == 4);
}

TEST_CASE("random parameters always produce members") {
  Rng rng(29);
  MatrixFamily f;
  f.n = 2;
  f.entries = {
      PolytopicEntry{{Polynomial{1, 1}, Polynomial{2, 1}, Polynomial{0, 1}}},
      IntervalEntry{{-1, 0}, {1, 2}},
      PolytopicEntry{{Polynomial{7}}},
      IntervalEntry{{0, 0, 1}, {1, 1, 2}},
  };
  for (int trial = 0; trial < 500; ++trial) {
    SampleParams p = random_params(f, rng);
    CHECK_NOTHROW(sample(f, p));
    double total = 0.0;
    for (double w : p.cells[0]) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("family dimension counts degrees of freedom") {
  MatrixFamily fixed;
  fixed.n = 1;
  fixed.entries = {PolytopicEntry{{Polynomial{1, 1}}}};
  CHECK(family_dimension(fixed) == 0);

  MatrixFamily seg;
  seg.n = 1;
  seg.entries = {PolytopicEntry{{Polynomial{1, 1}, Polynomial{2, 1}}}};
  CHECK(family_dimension(seg) > 0);

  MatrixFamily degenerate_box;
  degenerate_box.n = 1;
  degenerate_box.entries = {IntervalEntry{{1, 1}, {1, 1}}};
  CHECK(family_dimension(degenerate_box) == 0);
}

TEST_CASE("validation rejects malformed families") {
  MatrixFamily f;
  f.n = 2;
  f.entries = {PolytopicEntry{{Polynomial{1}}}};  // 1 cell instead of 4
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);

  MatrixFamily g;
  g.n = 1;
  g.entries = {PolytopicEntry{{}}};  // no generators
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);

  MatrixFamily h;
  h.n = 1;
  h.entries = {IntervalEntry{{0, 1}, {1}}};  // length mismatch
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);

  MatrixFamily k;
  k.n = 1;
  k.entries = {IntervalEntry{{2}, {1}}};  // lower > upper
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
}
