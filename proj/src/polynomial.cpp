#include "polystab/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polystab {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  canonicalize();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  canonicalize();
}

Polynomial Polynomial::constant(double c) { return Polynomial{std::vector<double>{c}}; }

Polynomial Polynomial::variable() { return Polynomial{std::vector<double>{0.0, 1.0}}; }

void Polynomial::canonicalize() {
  double max_mag = 0.0;
  for (double c : coeffs_) max_mag = std::max(max_mag, std::abs(c));
  const double floor = kTrimRelTol * max_mag;
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= floor) coeffs_.pop_back();
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial{std::move(d)};
}

Polynomial Polynomial::operator-() const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x = -x;
  return Polynomial{std::move(c)};
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial{std::move(c)};
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial{std::move(c)};
}

Polynomial operator*(double c, const Polynomial& p) {
  std::vector<double> out = p.coeffs_;
  for (double& x : out) x *= c;
  return Polynomial{std::move(out)};
}

bool Polynomial::approx_equal(const Polynomial& other, double tol) const {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  for (double c : other.coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return true;
  const size_t len = std::max(coeffs_.size(), other.coeffs_.size());
  for (size_t k = 0; k < len; ++k) {
    if (std::abs(coeff(static_cast<int>(k)) - other.coeff(static_cast<int>(k))) >
        tol * scale)
      return false;
  }
  return true;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0.0 && coeffs_.size() > 1) continue;
    if (!first) os << (coeffs_[k] < 0 ? " - " : " + ");
    else if (coeffs_[k] < 0) os << "-";
    const double mag = std::abs(coeffs_[k]);
    if (k == 0 || mag != 1.0) os << mag;
    if (k == 1) os << "s";
    else if (k > 1) os << "s^" << k;
    first = false;
  }
  return os.str();
}

Polynomial convex_combination(const Polynomial& p0, const Polynomial& p1,
                              double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("convex_combination: lambda must lie in [0,1]");
  return (1.0 - lambda) * p0 + lambda * p1;
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> rts,
                                  double lead, double imag_tol) {
  std::vector<std::complex<double>> c{lead};
  for (const auto& r : rts) {
    c.push_back(0.0);
    for (size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  double scale = 0.0;
  for (const auto& x : c) scale = std::max(scale, std::abs(x));
  std::vector<double> re(c.size());
  for (size_t k = 0; k < c.size(); ++k) {
    if (std::abs(c[k].imag()) > imag_tol * std::max(scale, 1.0))
      throw std::invalid_argument(
          "from_roots: root multiset is not closed under conjugation");
    re[k] = c[k].real();
  }
  return Polynomial{std::move(re)};
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b, double rel_tol) {
  if (b.is_zero()) throw std::invalid_argument("divide_exact: division by zero polynomial");
  if (a.is_zero()) return Polynomial{};
  if (a.degree() < b.degree())
    throw std::runtime_error("divide_exact: quotient is not a polynomial");
  std::vector<double> rem = a.coeffs();
  const auto& d = b.coeffs();
  const int qn = a.degree() - b.degree() + 1;
  std::vector<double> q(static_cast<size_t>(qn), 0.0);
  for (int k = qn - 1; k >= 0; --k) {
    const double f = rem[static_cast<size_t>(k) + d.size() - 1] / d.back();
    q[static_cast<size_t>(k)] = f;
    for (size_t j = 0; j < d.size(); ++j) rem[static_cast<size_t>(k) + j] -= f * d[j];
  }
  double rem_mag = 0.0, a_mag = 0.0;
  for (double c : rem) rem_mag = std::max(rem_mag, std::abs(c));
  for (double c : a.coeffs()) a_mag = std::max(a_mag, std::abs(c));
  if (rem_mag > rel_tol * std::max(a_mag, 1.0))
    throw std::runtime_error("divide_exact: nonzero remainder");
  return Polynomial{std::move(q)};
}

double cauchy_root_bound(const Polynomial& p) {
  if (p.degree() < 1) return 1.0;
  const auto& c = p.coeffs();
  double maxr = 0.0;
  for (size_t k = 0; k + 1 < c.size(); ++k)
    maxr = std::max(maxr, std::abs(c[k]) / std::abs(c.back()));
  return 1.0 + maxr;
}

namespace {

// One Newton step per iteration, keeping the better residual.
std::complex<double> polish_root(const Polynomial& p, const Polynomial& dp,
                                 std::complex<double> r) {
  constexpr int kMaxIter = 16;
  std::complex<double> best = r;
  double best_res = std::abs(p.evaluate(r));
  for (int it = 0; it < kMaxIter; ++it) {
    const std::complex<double> f = p.evaluate(r);
    const std::complex<double> df = dp.evaluate(r);
    if (std::abs(df) == 0.0) break;
    r -= f / df;
    const double res = std::abs(p.evaluate(r));
    if (res < best_res) {
      best_res = res;
      best = r;
    } else {
      break;
    }
  }
  return best;
}

double residual_scale(const Polynomial& p, std::complex<double> r) {
  const double m = std::abs(r);
  double scale = 0.0, pw = 1.0;
  for (double c : p.coeffs()) {
    scale += std::abs(c) * pw;
    pw *= m;
  }
  return std::max(scale, 1e-300);
}

}  // namespace

std::vector<std::complex<double>> roots(const Polynomial& p, double residual_tol) {
  if (p.is_zero()) throw std::domain_error("roots: zero polynomial has no defined root set");

  // Roots at the origin are deflated exactly before anything else runs:
  // constant-end coefficients below the canonical trim threshold count as
  // zero. The relative residual test below is degenerate at the origin
  // (every term of its scale vanishes together with |r|), and companion
  // eigenvalues of a multiple zero root carry O(eps^(1/m)) noise, so s^k is
  // factored out instead of being polished.
  const auto& full = p.coeffs();
  double maxabs = 0.0;
  for (double x : full) maxabs = std::max(maxabs, std::abs(x));
  size_t at_origin = 0;
  while (at_origin + 1 < full.size() &&
         std::abs(full[at_origin]) <= Polynomial::kTrimRelTol * maxabs) {
    ++at_origin;
  }
  const Polynomial q =
      at_origin == 0
          ? p
          : Polynomial(std::vector<double>(
                full.begin() + static_cast<std::ptrdiff_t>(at_origin), full.end()));

  const int d = q.degree();
  const auto& c = q.coeffs();
  std::vector<std::complex<double>> out(at_origin, std::complex<double>(0.0, 0.0));
  out.reserve(static_cast<size_t>(d) + at_origin);
  if (d == 0) return out;
  if (d == 1) {
    out.emplace_back(-c[0] / c[1], 0.0);
    return out;
  }
  if (d == 2) {
    // Numerically stable quadratic: q = -(b + sign(b)*sqrt(b^2-4ac))/2.
    const double a = c[2], b = c[1], cc = c[0];
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (b + std::copysign(sq, b == 0.0 ? 1.0 : b));
      if (q != 0.0) {
        out.emplace_back(q / a, 0.0);
        out.emplace_back(cc / q, 0.0);
      } else {
        out.emplace_back(0.0, 0.0);
        out.emplace_back(-b / a, 0.0);
      }
    } else {
      const double re = -b / (2.0 * a), im = std::sqrt(-disc) / (2.0 * a);
      out.emplace_back(re, im);
      out.emplace_back(re, -im);
    }
    return out;
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<size_t>(i)] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("roots: companion eigensolver did not converge");

  const Polynomial dq = q.derivative();
  for (int i = 0; i < d; ++i) out.push_back(polish_root(q, dq, solver.eigenvalues()(i)));

  for (size_t i = at_origin; i < out.size(); ++i) {
    const double res = std::abs(q.evaluate(out[i]));
    if (!(res <= residual_tol * residual_scale(q, out[i])))
      throw std::runtime_error("roots: residual bound violated after polishing");
  }
  return out;
}

}  // namespace polystab
