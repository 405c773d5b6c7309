#include <cmath>
#include <complex>

#include "doctest.h"
#include "polystab/region.hpp"
#include "polystab/rng.hpp"

using namespace polystab;
using C = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Test-side distance to the boundary, from the geometric definitions.
double ref_distance(const Region& r, C z) {
  switch (r.kind()) {
    case Region::Kind::kHurwitz: return std::abs(z.real());
    case Region::Kind::kDisk: return std::abs(std::abs(z) - 1.0);
    case Region::Kind::kShiftedHalfPlane: return std::abs(z.real() + r.sigma());
    case Region::Kind::kSector: {
      // Distance to the nearer of the two rays from the origin at angles
      // pi -+ phi, treating them as half-lines.
      double best = std::abs(z);
      for (double sgn : {1.0, -1.0}) {
        C dir = std::polar(1.0, kPi + sgn * r.phi());
        double t = z.real() * dir.real() + z.imag() * dir.imag();
        if (t < 0.0) t = 0.0;
        best = std::min(best, std::abs(z - t * dir));
      }
      return best;
    }
  }
  return 0.0;
}
}  // namespace

TEST_CASE("membership basics") {
  CHECK(Region::hurwitz().contains(C(-1, 0)));
  CHECK_FALSE(Region::hurwitz().contains(C(0, 1)));
  CHECK_FALSE(Region::disk().contains(C(1, 0)));
  CHECK(Region::disk().contains(C(0.99, 0)));
  CHECK_FALSE(Region::shifted(0.5).contains(C(-0.4, 0)));
  CHECK(Region::shifted(0.5).contains(C(-0.6, 0)));
  CHECK(Region::sector(kPi / 4).contains(C(-1, 0)));
  CHECK(Region::sector(kPi / 4).contains(C(-1, 0.99)));
  CHECK_FALSE(Region::sector(kPi / 4).contains(C(-1, 1.01)));
  CHECK_FALSE(Region::sector(kPi / 4).contains(C(0, 0)));  // the vertex
  CHECK_FALSE(Region::sector(kPi / 4).contains(C(1, 0)));
}

TEST_CASE("hurwitz membership equals the half-plane predicate") {
  Rng rng(5);
  Region r = Region::hurwitz();
  for (int i = 0; i < 1000; ++i) {
    C z(rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK(r.contains(z) == (z.real() < 0.0));
  }
}

TEST_CASE("boundary points of the disk at quarter resolution") {
  auto pts = Region::disk().boundary_points(4, 1.0);
  REQUIRE(pts.size() == 4);
  CHECK(std::abs(pts[0] - C(1, 0)) < 1e-12);
  CHECK(std::abs(pts[1] - C(0, 1)) < 1e-12);
  CHECK(std::abs(pts[2] - C(-1, 0)) < 1e-12);
  CHECK(std::abs(pts[3] - C(0, -1)) < 1e-12);
}

TEST_CASE("boundary points of the half-plane sweep omega uniformly") {
  auto pts = Region::hurwitz().boundary_points(3, 1.0);
  REQUIRE(pts.size() == 3);
  CHECK(std::abs(pts[0] - C(0, -1)) < 1e-12);
  CHECK(std::abs(pts[1] - C(0, 0)) < 1e-12);
  CHECK(std::abs(pts[2] - C(0, 1)) < 1e-12);
}

TEST_CASE("sector boundary points sit on the two rays") {
  Region r = Region::sector(kPi / 4);
  for (C z : r.boundary_points(33, 3.0)) {
    CHECK(z.real() <= 1e-12);
    CHECK(std::abs(z.real() + std::abs(z.imag())) < 1e-12);
  }
}

TEST_CASE("open regions exclude their boundary samples") {
  Region regions[] = {Region::hurwitz(), Region::disk(), Region::shifted(0.7),
                      Region::sector(1.0)};
  for (const Region& r : regions) {
    for (int count : {2, 5, 64}) {
      for (C z : r.boundary_points(count, 2.5)) {
        CHECK_FALSE(r.contains(z));
        CHECK(ref_distance(r, z) < 1e-12);
      }
    }
  }
}

TEST_CASE("boundary_distance matches the geometric formulas") {
  Rng rng(9);
  Region regions[] = {Region::hurwitz(), Region::disk(), Region::shifted(1.2),
                      Region::sector(0.9)};
  for (const Region& r : regions) {
    for (int i = 0; i < 500; ++i) {
      C z(rng.uniform(-4, 4), rng.uniform(-4, 4));
      CHECK(r.boundary_distance(z) == doctest::Approx(ref_distance(r, z)).epsilon(1e-9));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Region::shifted(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(Region::sector(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Region::sector(kPi / 2 + 0.01), std::invalid_argument);
  CHECK_NOTHROW(Region::sector(kPi / 2));
  CHECK_THROWS_AS(Region::hurwitz().boundary_points(1, 1.0), std::invalid_argument);
}

TEST_CASE("name round-trips through parse") {
  Region regions[] = {Region::hurwitz(), Region::disk(), Region::shifted(0.25),
                      Region::sector(0.75)};
  for (const Region& r : regions) {
    Region back = Region::parse(r.name());
    CHECK(back.kind() == r.kind());
    CHECK(back.sigma() == doctest::Approx(r.sigma()));
    CHECK(back.phi() == doctest::Approx(r.phi()));
  }
  CHECK_THROWS_AS(Region::parse("annulus"), std::invalid_argument);
  CHECK_THROWS_AS(Region::parse("shifted:-1"), std::invalid_argument);
  CHECK_THROWS_AS(Region::parse("sector:nope"), std::invalid_argument);
}
