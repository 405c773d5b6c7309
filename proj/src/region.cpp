#include "polystab/region.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polystab {

namespace {
constexpr double kPi = std::numbers::pi;

double ray_distance(std::complex<double> z, double angle) {
  // Distance to the ray {t * e^{i angle} : t >= 0}.
  const std::complex<double> dir{std::cos(angle), std::sin(angle)};
  const double along = z.real() * dir.real() + z.imag() * dir.imag();
  const double t = std::max(0.0, along);
  return std::abs(z - t * dir);
}
}  // namespace

Region Region::hurwitz() { return Region(Kind::kHurwitz, 0.0, 0.0); }
Region Region::disk() { return Region(Kind::kDisk, 0.0, 0.0); }

Region Region::shifted(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("region: shifted offset must be >= 0");
  return Region(Kind::kShiftedHalfPlane, sigma, 0.0);
}

Region Region::sector(double phi) {
  if (!(phi > 0.0 && phi <= kPi / 2.0))
    throw std::invalid_argument("region: sector half-angle must lie in (0, pi/2]");
  return Region(Kind::kSector, 0.0, phi);
}

Region Region::parse(const std::string& name) {
  if (name == "hurwitz") return hurwitz();
  if (name == "disk") return disk();
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string head = name.substr(0, colon);
    const std::string tail = name.substr(colon + 1);
    try {
      size_t used = 0;
      const double value = std::stod(tail, &used);
      if (used == tail.size()) {
        if (head == "shifted") return shifted(value);
        if (head == "sector") return sector(value);
      }
    } catch (const std::logic_error&) {
      // fall through to the common error below
    }
  }
  throw std::invalid_argument(
      "region: expected hurwitz | disk | shifted:<sigma> | sector:<phi-radians>, got \"" +
      name + "\"");
}

std::string Region::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kHurwitz: return "hurwitz";
    case Kind::kDisk: return "disk";
    case Kind::kShiftedHalfPlane: os << "shifted:" << sigma_; return os.str();
    case Kind::kSector: os << "sector:" << phi_; return os.str();
  }
  return "?";
}

bool Region::contains(std::complex<double> z) const {
  // Guard band for the two predicates that involve rounded cos/sin/hypot:
  // points within ~1e-14 of the boundary count as outside. Shrinking the
  // open set by an ulp-scale sliver is sound (stability only gets stricter)
  // and makes membership of constructed boundary samples deterministic.
  constexpr double kGuard = 1e-14;
  switch (kind_) {
    case Kind::kHurwitz: return z.real() < 0.0;
    case Kind::kDisk: return std::abs(z) < 1.0 - kGuard;
    case Kind::kShiftedHalfPlane: return z.real() < -sigma_;
    case Kind::kSector: {
      if (z == std::complex<double>(0.0, 0.0)) return false;
      if (phi_ == kPi / 2.0) return z.real() < 0.0;  // collapses to hurwitz
      // |arg(-z)| < phi in multiplicative form (no arg/atan2 cancellation).
      const double lhs = std::abs(z.imag()) * std::cos(phi_);
      const double rhs = -z.real() * std::sin(phi_);
      return z.real() < 0.0 && rhs - lhs > kGuard * (rhs + lhs);
    }
  }
  return false;
}

double Region::boundary_distance(std::complex<double> z) const {
  switch (kind_) {
    case Kind::kHurwitz: return std::abs(z.real());
    case Kind::kDisk: return std::abs(std::abs(z) - 1.0);
    case Kind::kShiftedHalfPlane: return std::abs(z.real() + sigma_);
    case Kind::kSector:
      return std::min(ray_distance(z, kPi - phi_), ray_distance(z, kPi + phi_));
  }
  return 0.0;
}

std::complex<double> Region::boundary_point(double t, double sweep_limit) const {
  switch (kind_) {
    case Kind::kHurwitz:
      return {0.0, -sweep_limit + 2.0 * sweep_limit * t};
    case Kind::kDisk: {
      const double theta = 2.0 * kPi * t;
      return {std::cos(theta), std::sin(theta)};
    }
    case Kind::kShiftedHalfPlane:
      return {-sigma_, -sweep_limit + 2.0 * sweep_limit * t};
    case Kind::kSector: {
      const double u = -sweep_limit + 2.0 * sweep_limit * t;
      const double angle = u >= 0.0 ? kPi - phi_ : kPi + phi_;
      return std::abs(u) * std::complex<double>{std::cos(angle), std::sin(angle)};
    }
  }
  return {};
}

double Region::boundary_parameter(double t, double sweep_limit) const {
  if (kind_ == Kind::kDisk) return 2.0 * kPi * t;
  return -sweep_limit + 2.0 * sweep_limit * t;
}

std::vector<std::complex<double>> Region::boundary_points(int count,
                                                          double sweep_limit) const {
  if (count < 2) throw std::invalid_argument("boundary_points: count must be >= 2");
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = has_bounded_boundary()
                         ? static_cast<double>(k) / count
                         : static_cast<double>(k) / (count - 1);
    pts.push_back(boundary_point(t, sweep_limit));
  }
  return pts;
}

}  // namespace polystab
