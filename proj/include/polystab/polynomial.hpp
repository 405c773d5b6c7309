#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace polystab {

/// Dense univariate polynomial with real coefficients stored in ascending
/// order: coeffs()[k] multiplies s^k.
///
/// Instances are immutable values in canonical form: the highest-index
/// coefficient is nonzero unless the polynomial is identically zero.
/// Coefficients whose magnitude falls below kTrimRelTol times the largest
/// magnitude are treated as zero when trimming the tail, so roundoff in
/// convex combinations cannot inflate the degree.
class Polynomial {
 public:
  /// Degree reported for the identically-zero polynomial ("minus infinity").
  static constexpr int kDegreeNegInf = std::numeric_limits<int>::min();
  static constexpr double kTrimRelTol = 1e-12;

  /// The zero polynomial.
  Polynomial() = default;

  /// Canonicalizes on construction (trims the near-zero tail).
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  /// The monomial s.
  static Polynomial variable();

  /// Expands lead * prod (s - r_k). The root multiset must be closed under
  /// conjugation up to `imag_tol`; throws std::invalid_argument otherwise.
  static Polynomial from_roots(std::span<const std::complex<double>> roots,
                               double lead = 1.0, double imag_tol = 1e-9);

  const std::vector<double>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const {
    return coeffs_.empty() ? kDegreeNegInf : static_cast<int>(coeffs_.size()) - 1;
  }
  /// Coefficient of s^k; zero beyond the stored range.
  double coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
  }
  double leading_coefficient() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  std::complex<double> evaluate(std::complex<double> z) const;
  double evaluate(double x) const;

  Polynomial derivative() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double c, const Polynomial& p);
  friend Polynomial operator*(const Polynomial& p, double c) { return c * p; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  /// Coefficient-wise agreement within `tol` relative to the largest
  /// coefficient magnitude of either operand.
  bool approx_equal(const Polynomial& other, double tol) const;

  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<double> coeffs_;
};

/// (1-lambda)*p0 + lambda*p1. Throws std::invalid_argument unless
/// lambda is in [0,1].
Polynomial convex_combination(const Polynomial& p0, const Polynomial& p1,
                              double lambda);

/// Exact quotient a / b for polynomials known to divide exactly (up to
/// roundoff). Throws std::invalid_argument on division by zero and
/// std::runtime_error if the remainder is not negligible.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b,
                        double rel_tol = 1e-6);

/// All deg(p) roots with multiplicity, via balanced companion-matrix
/// eigenvalues followed by Newton polishing. Roots at the origin (constant
/// end coefficients within the trim tolerance of zero) are deflated exactly
/// and reported as 0; the residual test is meaningless there.
///
/// Throws std::domain_error for the zero polynomial and std::runtime_error
/// if the eigensolver fails to converge or a root misses the residual bound
/// |p(r)| <= residual_tol * sum_k |c_k| |r|^k.
std::vector<std::complex<double>> roots(const Polynomial& p,
                                        double residual_tol = 1e-8);

/// 1 + max_k |c_k| / |c_d|: every root of p has magnitude below this.
double cauchy_root_bound(const Polynomial& p);

}  // namespace polystab
