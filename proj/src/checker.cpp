#include "polystab/checker.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polystab/errors.hpp"
#include "polystab/poly_matrix.hpp"
#include "polystab/rng.hpp"

namespace polystab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A point outside every supported region: Re 2 > 0 (hurwitz), |2| > 1
// (disk), Re 2 > -sigma (shifted), arg(-2) = pi > phi (sector).
constexpr std::complex<double> kOutsidePoint{2.0, 0.0};

std::uint64_t double_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

// ---------------------------------------------------------------------------
// Multi-affine determinant of a critical family.
//
// The designated entries occupy distinct rows, so det(z; lambda) is affine in
// each lambda_s separately:
//     det(z; lambda) = sum_{S subset of rows} w_S(z) prod_{s in S} lambda_s.
// A multi-affine function is determined by its 2^n corner values, so the w_S
// come from the corner determinants by inclusion-exclusion. The same corner
// determinants feed the degree-invariance certificate: coefficient k of the
// determinant is itself multi-affine in lambda, hence ranges inside the hull
// of its corner values and vanishes identically when all corners agree on 0.
// ---------------------------------------------------------------------------
struct MultiAffineDet {
  int n = 0;
  std::vector<Polynomial> corners;  // corner determinants, mask-indexed
  std::vector<Polynomial> w;        // subset coefficients, mask-indexed

  static MultiAffineDet build(const CriticalFamily& cf) {
    MultiAffineDet m;
    m.n = cf.n;
    size_t size = size_t{1} << cf.n;
    m.corners.reserve(size);
    std::vector<double> lambdas(static_cast<size_t>(cf.n));
    for (size_t mask = 0; mask < size; ++mask) {
      for (int s = 0; s < cf.n; ++s) {
        lambdas[static_cast<size_t>(s)] = (mask >> s) & 1 ? 1.0 : 0.0;
      }
      m.corners.push_back(det(cf.instantiate(lambdas)));
    }
    m.w = m.corners;
    for (int s = 0; s < cf.n; ++s) {
      for (size_t mask = 0; mask < size; ++mask) {
        if (mask & (size_t{1} << s)) m.w[mask] = m.w[mask] - m.w[mask ^ (size_t{1} << s)];
      }
    }
    return m;
  }

  std::vector<std::complex<double>> eval_w(std::complex<double> z) const {
    std::vector<std::complex<double>> out(w.size());
    for (size_t k = 0; k < w.size(); ++k) out[k] = w[k].evaluate(z);
    return out;
  }
};

std::complex<double> eval_multi_affine(const std::vector<std::complex<double>>& wz,
                                       std::span<const double> lambda) {
  std::complex<double> f = wz[0];
  for (size_t mask = 1; mask < wz.size(); ++mask) {
    double prod = 1.0;
    for (size_t s = 0; s < lambda.size(); ++s) {
      if (mask & (size_t{1} << s)) prod *= lambda[s];
    }
    f += wz[mask] * prod;
  }
  return f;
}

ComplexBox enclose_multi_affine(const std::vector<std::complex<double>>& wz,
                                std::span<const double> lo,
                                std::span<const double> hi) {
  ComplexBox box = ComplexBox::point(wz[0]);
  for (size_t mask = 1; mask < wz.size(); ++mask) {
    double plo = 1.0, phi = 1.0;
    for (size_t s = 0; s < lo.size(); ++s) {
      if (mask & (size_t{1} << s)) {
        plo *= lo[s];
        phi *= hi[s];
      }
    }
    box += scale_interval(wz[mask], plo, phi);
  }
  return box;
}

// Sound root-magnitude bound for every member: coefficient k is multi-affine
// in lambda, so |c_k| is bounded by the largest corner magnitude, and the
// leading coefficient (same strict sign at all corners) is bounded below by
// the smallest corner magnitude. Cauchy's bound then applies uniformly.
double corner_root_bound(const std::vector<Polynomial>& corners, int degree) {
  double min_lead = kInf, max_low = 0.0;
  for (const Polynomial& c : corners) {
    min_lead = std::min(min_lead, std::abs(c.coeff(degree)));
    for (int k = 0; k < degree; ++k) max_low = std::max(max_low, std::abs(c.coeff(k)));
  }
  if (!(min_lead > 0.0)) return 1.0;
  return 1.0 + max_low / min_lead;
}

// Boundary projection used by the margin probe.
std::complex<double> project_to_boundary(const Region& r, std::complex<double> z) {
  switch (r.kind()) {
    case Region::Kind::kHurwitz:
      return {0.0, z.imag()};
    case Region::Kind::kShiftedHalfPlane:
      return {-r.sigma(), z.imag()};
    case Region::Kind::kDisk: {
      double m = std::abs(z);
      return m == 0.0 ? std::complex<double>{1.0, 0.0} : z / m;
    }
    case Region::Kind::kSector: {
      std::complex<double> best{0.0, 0.0};
      double best_d = std::abs(z);
      for (double ang : {M_PI - r.phi(), M_PI + r.phi()}) {
        std::complex<double> u = std::polar(1.0, ang);
        double len = std::max(0.0, z.real() * u.real() + z.imag() * u.imag());
        std::complex<double> p = u * len;
        if (std::abs(z - p) < best_d) {
          best_d = std::abs(z - p);
          best = p;
        }
      }
      return best;
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Boundary sweep schedule: a uniform grid in t, then refinement rounds that
// trisect around the lowest-clearance fraction of points.
// ---------------------------------------------------------------------------
struct SweepPoint {
  double t = 0.0;
  double score = kInf;  // smallest clearance of 0 observed at this point
};

std::vector<double> initial_ts(int count, bool periodic) {
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    ts.push_back(periodic ? static_cast<double>(k) / count
                          : static_cast<double>(k) / (count - 1));
  }
  return ts;
}

std::vector<double> refinement_ts(const std::vector<SweepPoint>& pts, int count,
                                  bool periodic, int round, double fraction) {
  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (pts[a].score != pts[b].score) return pts[a].score < pts[b].score;
    return pts[a].t < pts[b].t;
  });
  size_t pick = std::max<size_t>(1, static_cast<size_t>(
                                        static_cast<double>(pts.size()) * fraction));
  pick = std::min(pick, pts.size());
  double base = periodic ? 1.0 / count : 1.0 / (count - 1);
  double h = base / std::pow(3.0, round + 1);
  std::vector<double> out;
  out.reserve(2 * pick);
  for (size_t i = 0; i < pick; ++i) {
    for (double t : {pts[order[i]].t - h, pts[order[i]].t + h}) {
      if (periodic) {
        t -= std::floor(t);
      } else {
        t = std::clamp(t, 0.0, 1.0);
      }
      out.push_back(t);
    }
  }
  return out;
}

// Distance from the origin to the segment [a, b], plus the parameter of the
// closest point.
double segment_clearance(std::complex<double> a, std::complex<double> b,
                         double* lambda_at_min) {
  std::complex<double> d = b - a;
  double dd = std::norm(d);
  double lam = 0.0;
  if (dd > 0.0) lam = std::clamp(-(a.real() * d.real() + a.imag() * d.imag()) / dd, 0.0, 1.0);
  if (lambda_at_min) *lambda_at_min = lam;
  return std::abs(a + lam * d);
}

std::string marginal_or_outside(bool marginal) {
  return marginal ? "root within the marginal band of the region boundary"
                  : "root outside the region";
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::kStable:
      return "stable";
    case Status::kUnstable:
      return "unstable";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

void CheckerConfig::validate() const {
  if (boundary_count < 2) throw std::invalid_argument("boundary_count must be >= 2");
  if (!(sweep_limit_multiplier > 0.0)) {
    throw std::invalid_argument("sweep_limit_multiplier must be positive");
  }
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (!(epsilon_exclusion > 0.0)) {
    throw std::invalid_argument("epsilon_exclusion must be positive");
  }
  if (oracle_samples < 1) throw std::invalid_argument("oracle_samples must be >= 1");
  if (critical_budget < 1) throw std::invalid_argument("critical_budget must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (!(marginal_root_tol > 0.0)) {
    throw std::invalid_argument("marginal_root_tol must be positive");
  }
  if (refine_rounds < 0) throw std::invalid_argument("refine_rounds must be >= 0");
  if (!(refine_fraction > 0.0) || refine_fraction > 1.0) {
    throw std::invalid_argument("refine_fraction must be in (0, 1]");
  }
  if (node_budget < 1) throw std::invalid_argument("node_budget must be >= 1");
}

bool is_stable(const Polynomial& p, const Region& r) {
  for (const auto& root : roots(p)) {
    if (!r.contains(root)) return false;
  }
  return true;
}

RootPlacement classify_roots(const Polynomial& p, const Region& r,
                             double marginal_tol) {
  RootPlacement out;
  out.stable = true;
  bool have_clean = false, have_marginal = false;
  std::complex<double> clean{}, marginal{};
  for (const auto& root : roots(p)) {
    double bd = r.boundary_distance(root);
    if (!r.contains(root) && bd > marginal_tol) {
      if (!have_clean) clean = root;
      have_clean = true;
    } else if (bd <= marginal_tol) {
      if (!have_marginal) marginal = root;
      have_marginal = true;
    }
  }
  if (have_clean) {
    out.stable = false;
    out.marginal = false;
    out.offender = clean;
  } else if (have_marginal) {
    out.stable = false;
    out.marginal = true;
    out.offender = marginal;
  }
  return out;
}

// ---------------------------------------------------------------------------
// segment_stable
// ---------------------------------------------------------------------------

namespace {

// Confirms a candidate crossing parameter by instantiating the member and
// computing its roots directly.
std::optional<Witness> confirm_segment_candidate(const Polynomial& p0,
                                                 const Polynomial& p1,
                                                 double lambda, const Region& r,
                                                 const CheckerConfig& cfg) {
  Polynomial member = convex_combination(p0, p1, lambda);
  if (member.is_zero()) {
    Witness w;
    w.lambdas = {lambda};
    w.location = kOutsidePoint;
    w.note = "determinant vanishes identically; every point is a root";
    return w;
  }
  RootPlacement rp = classify_roots(member, r, cfg.marginal_root_tol);
  if (rp.stable) return std::nullopt;
  Witness w;
  w.lambdas = {lambda};
  w.location = rp.offender;
  w.note = marginal_or_outside(rp.marginal);
  return w;
}

}  // namespace

Verdict segment_stable(const Polynomial& p0, const Polynomial& p1, const Region& r,
                       const CheckerConfig& cfg) {
  cfg.validate();
  Verdict v;
  v.diagnostics.families_checked = 1;

  if (p0 == p1) {
    // Degenerate segment: defer to the point predicate.
    RootPlacement rp = classify_roots(p0, r, cfg.marginal_root_tol);
    if (rp.stable) {
      v.status = Status::kStable;
    } else {
      v.status = Status::kUnstable;
      Witness w;
      w.lambdas = {0.0};
      w.location = rp.offender;
      w.note = marginal_or_outside(rp.marginal);
      if (rp.marginal) v.diagnostics.marginal_hits = 1;
      v.witness = w;
    }
    return v;
  }

  // Degree invariance along the segment: equal endpoint degrees and a
  // leading coefficient that cannot vanish in between.
  int d0 = p0.degree(), d1 = p1.degree();
  if (d0 != d1) {
    v.status = Status::kInconclusive;
    Witness w;
    w.lambdas = {d0 > d1 ? 1.0 : 0.0};
    w.note = "degree drops along the segment";
    v.witness = w;
    v.diagnostics.exhausted = "degree invariance precheck";
    return v;
  }
  double l0 = p0.leading_coefficient(), l1 = p1.leading_coefficient();
  if (l0 * l1 <= 0.0) {
    v.status = Status::kInconclusive;
    Witness w;
    w.lambdas = {l0 / (l0 - l1)};
    w.note = "leading coefficient vanishes along the segment";
    v.witness = w;
    v.diagnostics.exhausted = "degree invariance precheck";
    return v;
  }

  // Endpoints are members; check them directly for cheap witnesses and to
  // anchor the zero-exclusion argument with one stable member.
  RootPlacement rp0 = classify_roots(p0, r, cfg.marginal_root_tol);
  if (!rp0.stable) {
    v.status = Status::kUnstable;
    Witness w;
    w.lambdas = {0.0};
    w.location = rp0.offender;
    w.note = marginal_or_outside(rp0.marginal);
    if (rp0.marginal) v.diagnostics.marginal_hits = 1;
    v.witness = w;
    return v;
  }
  RootPlacement rp1 = classify_roots(p1, r, cfg.marginal_root_tol);
  if (!rp1.stable) {
    // The near end is stable, the far end is not: report the first exit,
    // not the far vertex. Bisection pins the transition lambda.
    double lo = 0.0, hi = 1.0;
    RootPlacement at_hi = rp1;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      RootPlacement rp =
          classify_roots(convex_combination(p0, p1, mid), r, cfg.marginal_root_tol);
      if (rp.stable) {
        lo = mid;
      } else {
        hi = mid;
        at_hi = rp;
      }
    }
    v.status = Status::kUnstable;
    Witness w;
    w.lambdas = {hi};
    w.location = at_hi.offender;
    w.note = marginal_or_outside(at_hi.marginal);
    if (at_hi.marginal) v.diagnostics.marginal_hits = 1;
    v.witness = w;
    return v;
  }

  double sweep_limit =
      cfg.sweep_limit_multiplier * corner_root_bound({p0, p1}, d0);
  bool periodic = r.has_bounded_boundary();

  struct Eval {
    double t;
    std::complex<double> f0, f1;
    double score;
  };
  std::vector<Eval> evals;
  auto probe = [&](double t) {
    std::complex<double> z = r.boundary_point(t, sweep_limit);
    Eval e;
    e.t = t;
    e.f0 = p0.evaluate(z);
    e.f1 = p1.evaluate(z);
    double lam = 0.0;
    e.score = segment_clearance(e.f0, e.f1, &lam);
    evals.push_back(e);
    return std::pair<double, double>{e.score, lam};
  };

  std::vector<SweepPoint> pts;
  bool unresolved = false;
  std::string unresolved_why;
  auto handle = [&](double t) -> std::optional<Witness> {
    auto [score, lam] = probe(t);
    pts.push_back(SweepPoint{t, score});
    ++v.diagnostics.boundary_points;
    if (score <= cfg.epsilon_exclusion) {
      if (auto w = confirm_segment_candidate(p0, p1, lam, r, cfg)) return w;
      unresolved = true;
      unresolved_why = "value segment meets 0 within the exclusion margin but no "
                       "member root confirms it";
    }
    return std::nullopt;
  };

  for (double t : initial_ts(cfg.boundary_count, periodic)) {
    if (auto w = handle(t)) {
      v.status = Status::kUnstable;
      if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
      v.witness = std::move(w);
      return v;
    }
  }
  for (int round = 0; round < cfg.refine_rounds; ++round) {
    for (double t :
         refinement_ts(pts, cfg.boundary_count, periodic, round, cfg.refine_fraction)) {
      if (auto w = handle(t)) {
        v.status = Status::kUnstable;
        if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
        v.witness = std::move(w);
        return v;
      }
    }
  }

  // Transversal crossings pass between sweep points without a small
  // clearance at any grid point: scan for sign changes of the cross product
  // cross(f0, f1), which vanishes exactly when 0 lies on the line through
  // f0 and f1, and bisect the bracket.
  std::sort(evals.begin(), evals.end(),
            [](const Eval& a, const Eval& b) { return a.t < b.t; });
  auto cross = [](std::complex<double> a, std::complex<double> b) {
    return a.real() * b.imag() - a.imag() * b.real();
  };
  size_t limit = periodic ? evals.size() : evals.size() - 1;
  for (size_t i = 0; i < limit; ++i) {
    const Eval& a = evals[i];
    const Eval& b = evals[(i + 1) % evals.size()];
    double ga = cross(a.f0, a.f1), gb = cross(b.f0, b.f1);
    if (!(ga * gb < 0.0)) continue;
    double ta = a.t, tb = b.t;
    double wrap = periodic && i + 1 == evals.size() ? 1.0 : 0.0;
    tb += wrap;
    for (int it = 0; it < 100; ++it) {
      double tm = 0.5 * (ta + tb);
      double tw = tm - std::floor(tm);
      std::complex<double> z = r.boundary_point(tw, sweep_limit);
      double gm = cross(p0.evaluate(z), p1.evaluate(z));
      if (ga * gm <= 0.0) {
        tb = tm;
      } else {
        ta = tm;
        ga = gm;
      }
    }
    double tw = 0.5 * (ta + tb);
    tw -= std::floor(tw);
    std::complex<double> z = r.boundary_point(tw, sweep_limit);
    ++v.diagnostics.boundary_points;
    std::complex<double> f0 = p0.evaluate(z), f1 = p1.evaluate(z);
    std::complex<double> den = f0 - f1;
    if (std::abs(den) == 0.0) continue;
    std::complex<double> lam = f0 / den;
    if (lam.real() < -1e-9 || lam.real() > 1.0 + 1e-9) continue;
    double lam_r = std::clamp(lam.real(), 0.0, 1.0);
    if (auto w = confirm_segment_candidate(p0, p1, lam_r, r, cfg)) {
      v.status = Status::kUnstable;
      if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
      v.witness = std::move(w);
      return v;
    }
    unresolved = true;
    unresolved_why = "sign change of the value-segment cross product was not "
                     "confirmed by a member root";
  }

  // Last look at the tightest points: even when clearance stays above the
  // margin, a member root may sit on the boundary between sweep points.
  std::sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.t < b.t;
  });
  for (size_t i = 0; i < std::min<size_t>(3, pts.size()); ++i) {
    std::complex<double> z = r.boundary_point(pts[i].t, sweep_limit);
    double lam = 0.0;
    segment_clearance(p0.evaluate(z), p1.evaluate(z), &lam);
    if (auto w = confirm_segment_candidate(p0, p1, lam, r, cfg)) {
      v.status = Status::kUnstable;
      if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
      v.witness = std::move(w);
      return v;
    }
  }

  if (unresolved) {
    v.status = Status::kInconclusive;
    v.diagnostics.exhausted = unresolved_why;
    return v;
  }
  v.status = Status::kStable;
  return v;
}

// ---------------------------------------------------------------------------
// critical_family_stable
// ---------------------------------------------------------------------------

namespace {

std::optional<Witness> confirm_lambda_candidate(const CriticalFamily& cf,
                                                std::span<const double> lambda,
                                                const Region& r,
                                                const CheckerConfig& cfg) {
  Polynomial member = det(cf.instantiate(lambda));
  if (member.is_zero()) {
    Witness w;
    w.lambdas.assign(lambda.begin(), lambda.end());
    w.location = kOutsidePoint;
    w.note = "determinant vanishes identically; every point is a root";
    return w;
  }
  RootPlacement rp = classify_roots(member, r, cfg.marginal_root_tol);
  if (rp.stable) return std::nullopt;
  Witness w;
  w.lambdas.assign(lambda.begin(), lambda.end());
  w.location = rp.offender;
  w.note = marginal_or_outside(rp.marginal);
  return w;
}

// Coordinate descent on |f(lambda)|^2: f is affine in each coordinate, so
// the per-coordinate minimizer has a closed form, clamped to the box.
std::vector<double> descend_to_zero(const std::vector<std::complex<double>>& wz,
                                    int n, std::span<const double> lo,
                                    std::span<const double> hi) {
  std::vector<double> lam(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) lam[static_cast<size_t>(s)] = 0.5 * (lo[s] + hi[s]);
  for (int pass = 0; pass < 4; ++pass) {
    for (int s = 0; s < n; ++s) {
      std::complex<double> b{0.0, 0.0};
      for (size_t mask = 1; mask < wz.size(); ++mask) {
        if (!(mask & (size_t{1} << s))) continue;
        double prod = 1.0;
        for (int t = 0; t < n; ++t) {
          if (t != s && (mask & (size_t{1} << t))) prod *= lam[static_cast<size_t>(t)];
        }
        b += wz[mask] * prod;
      }
      double bb = std::norm(b);
      if (bb == 0.0) continue;
      std::complex<double> f = eval_multi_affine(wz, lam);
      std::complex<double> a = f - b * lam[static_cast<size_t>(s)];
      double best = -(a.real() * b.real() + a.imag() * b.imag()) / bb;
      lam[static_cast<size_t>(s)] = std::clamp(best, lo[s], hi[s]);
    }
  }
  return lam;
}

struct ZOutcome {
  std::optional<Witness> witness;
  double score = kInf;
  bool unresolved = false;
  std::uint64_t nodes = 0;
  int depth = 0;
};

// Zero exclusion for one boundary point: subdivide the lambda box until the
// enclosure clears 0 everywhere, a member root confirms instability, or the
// depth/node budget runs out.
ZOutcome exclude_zero_at(const std::vector<std::complex<double>>& wz,
                         const CriticalFamily& cf, const Region& r,
                         const CheckerConfig& cfg, double t) {
  ZOutcome out;
  int n = cf.n;
  struct Node {
    std::array<double, 8> lo{}, hi{};
    int depth = 0;
  };
  std::vector<Node> stack;
  Node root;
  for (int s = 0; s < n; ++s) {
    root.lo[static_cast<size_t>(s)] = 0.0;
    root.hi[static_cast<size_t>(s)] = 1.0;
  }
  stack.push_back(root);
  Rng rng = Rng::stream(cfg.seed ^ 0x6d63666cu, double_bits(t));

  while (!stack.empty()) {
    if (out.nodes >= cfg.node_budget) {
      out.unresolved = true;
      out.score = 0.0;
      break;
    }
    Node node = stack.back();
    stack.pop_back();
    ++out.nodes;
    out.depth = std::max(out.depth, node.depth);
    std::span<const double> lo(node.lo.data(), static_cast<size_t>(n));
    std::span<const double> hi(node.hi.data(), static_cast<size_t>(n));
    ComplexBox box = enclose_multi_affine(wz, lo, hi);
    double dist = box.distance_to_zero();
    out.score = std::min(out.score, dist);
    if (dist > cfg.epsilon_exclusion) continue;

    int widest = 0;
    double width = -1.0;
    for (int s = 0; s < n; ++s) {
      double w = node.hi[static_cast<size_t>(s)] - node.lo[static_cast<size_t>(s)];
      if (w > width) {
        width = w;
        widest = s;
      }
    }
    bool bottom = node.depth >= cfg.max_depth || width <= 0.0;
    if (!bottom) {
      double mid = 0.5 * (node.lo[static_cast<size_t>(widest)] +
                          node.hi[static_cast<size_t>(widest)]);
      Node a = node, b = node;
      a.hi[static_cast<size_t>(widest)] = mid;
      b.lo[static_cast<size_t>(widest)] = mid;
      a.depth = b.depth = node.depth + 1;
      stack.push_back(a);
      stack.push_back(b);
      continue;
    }

    // Bottom of the recursion: hunt for a confirming member.
    std::vector<double> cand = descend_to_zero(wz, n, lo, hi);
    if (auto w = confirm_lambda_candidate(cf, cand, r, cfg)) {
      out.witness = std::move(w);
      return out;
    }
    for (int k = 0; k < 4; ++k) {
      std::vector<double> draw(static_cast<size_t>(n));
      for (int s = 0; s < n; ++s) {
        draw[static_cast<size_t>(s)] = rng.uniform(node.lo[static_cast<size_t>(s)],
                                                   node.hi[static_cast<size_t>(s)]);
      }
      if (auto w = confirm_lambda_candidate(cf, draw, r, cfg)) {
        out.witness = std::move(w);
        return out;
      }
    }
    out.unresolved = true;
    out.score = 0.0;
  }
  return out;
}

}  // namespace

ComplexBox value_enclosure(const CriticalFamily& cf, std::complex<double> z) {
  MultiAffineDet mad = MultiAffineDet::build(cf);
  auto wz = mad.eval_w(z);
  std::vector<double> lo(static_cast<size_t>(cf.n), 0.0);
  std::vector<double> hi(static_cast<size_t>(cf.n), 1.0);
  return enclose_multi_affine(wz, lo, hi);
}

Verdict critical_family_stable(const CriticalFamily& cf, const Region& r,
                               const CheckerConfig& cfg) {
  cfg.validate();
  if (cf.n == 1) {
    // One designated cell is the whole matrix: this is exactly the segment
    // primitive.
    return segment_stable(cf.designated[0].p0, cf.designated[0].p1, r, cfg);
  }

  Verdict v;
  v.diagnostics.families_checked = 1;
  MultiAffineDet mad = MultiAffineDet::build(cf);

  // Degree certificate over the whole hypercube from the corner
  // determinants (see MultiAffineDet).
  auto corner_lambdas = [&](size_t mask) {
    std::vector<double> lam(static_cast<size_t>(cf.n));
    for (int s = 0; s < cf.n; ++s) lam[static_cast<size_t>(s)] = (mask >> s) & 1 ? 1.0 : 0.0;
    return lam;
  };
  size_t argmin = 0;
  int dmin = mad.corners[0].degree(), dmax = dmin;
  for (size_t mask = 1; mask < mad.corners.size(); ++mask) {
    int d = mad.corners[mask].degree();
    if (d < dmin) {
      dmin = d;
      argmin = mask;
    }
    dmax = std::max(dmax, d);
  }
  if (dmax == Polynomial::kDegreeNegInf) {
    // Identically zero at every corner, hence everywhere.
    v.status = Status::kUnstable;
    Witness w;
    w.lambdas = corner_lambdas(0);
    w.location = kOutsidePoint;
    w.note = "determinant vanishes identically; every point is a root";
    v.witness = w;
    return v;
  }
  if (dmin != dmax) {
    v.status = Status::kInconclusive;
    Witness w;
    w.lambdas = corner_lambdas(argmin);
    w.note = "determinant degree varies over the edge parameters";
    v.witness = w;
    v.diagnostics.exhausted = "degree invariance precheck";
    return v;
  }
  const int deg = dmax;
  double lead0 = mad.corners[0].leading_coefficient();
  for (size_t mask = 1; mask < mad.corners.size(); ++mask) {
    if (mad.corners[mask].leading_coefficient() * lead0 < 0.0) {
      v.status = Status::kInconclusive;
      Witness w;
      w.lambdas = corner_lambdas(mask);
      w.note = "leading coefficient changes sign across the edge parameters";
      v.witness = w;
      v.diagnostics.exhausted = "degree invariance precheck";
      return v;
    }
  }

  // One stable member anchors zero exclusion; the all-zero corner is a
  // member, and an unstable corner is already a witness.
  {
    RootPlacement rp = classify_roots(mad.corners[0], r, cfg.marginal_root_tol);
    if (!rp.stable) {
      v.status = Status::kUnstable;
      Witness w;
      w.lambdas = corner_lambdas(0);
      w.location = rp.offender;
      w.note = marginal_or_outside(rp.marginal);
      if (rp.marginal) v.diagnostics.marginal_hits = 1;
      v.witness = w;
      return v;
    }
  }

  double sweep_limit =
      cfg.sweep_limit_multiplier * corner_root_bound(mad.corners, deg);
  bool periodic = r.has_bounded_boundary();

  std::vector<SweepPoint> pts;
  bool unresolved = false;
  auto handle = [&](double t) -> std::optional<Witness> {
    std::complex<double> z = r.boundary_point(t, sweep_limit);
    auto wz = mad.eval_w(z);
    ZOutcome zo = exclude_zero_at(wz, cf, r, cfg, t);
    ++v.diagnostics.boundary_points;
    v.diagnostics.subdivisions += zo.nodes;
    v.diagnostics.max_depth_reached = std::max(v.diagnostics.max_depth_reached, zo.depth);
    pts.push_back(SweepPoint{t, zo.score});
    if (zo.witness) return zo.witness;
    if (zo.unresolved) unresolved = true;
    return std::nullopt;
  };

  for (double t : initial_ts(cfg.boundary_count, periodic)) {
    if (auto w = handle(t)) {
      v.status = Status::kUnstable;
      if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
      v.witness = std::move(w);
      return v;
    }
  }
  for (int round = 0; round < cfg.refine_rounds; ++round) {
    for (double t :
         refinement_ts(pts, cfg.boundary_count, periodic, round, cfg.refine_fraction)) {
      if (auto w = handle(t)) {
        v.status = Status::kUnstable;
        if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
        v.witness = std::move(w);
        return v;
      }
    }
  }

  // Tightest points get one direct member check each: a root can sit on the
  // boundary between swept points without pushing any enclosure into 0.
  std::sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.t < b.t;
  });
  std::vector<double> lo(static_cast<size_t>(cf.n), 0.0);
  std::vector<double> hi(static_cast<size_t>(cf.n), 1.0);
  for (size_t i = 0; i < std::min<size_t>(3, pts.size()); ++i) {
    std::complex<double> z = r.boundary_point(pts[i].t, sweep_limit);
    auto wz = mad.eval_w(z);
    std::vector<double> cand = descend_to_zero(wz, cf.n, lo, hi);
    if (auto w = confirm_lambda_candidate(cf, cand, r, cfg)) {
      v.status = Status::kUnstable;
      if (w->note.find("marginal") != std::string::npos) v.diagnostics.marginal_hits = 1;
      v.witness = std::move(w);
      return v;
    }
  }

  if (unresolved) {
    v.status = Status::kInconclusive;
    v.diagnostics.exhausted =
        "lambda-box subdivision exhausted depth or node budget without exclusion";
    return v;
  }
  v.status = Status::kStable;
  return v;
}

// ---------------------------------------------------------------------------
// family_stable
// ---------------------------------------------------------------------------

namespace {

// Maps a parameter assignment for the corner-polytope normalization back to
// the original family: polytopic cells pass through, interval cells get the
// convex combination of the corner generators as a coefficient vector.
SampleParams translate_to_original(const MatrixFamily& orig,
                                   const MatrixFamily& converted,
                                   const SampleParams& p) {
  SampleParams out;
  out.cells.resize(p.cells.size());
  for (size_t k = 0; k < p.cells.size(); ++k) {
    if (std::holds_alternative<PolytopicEntry>(orig.entries[k])) {
      out.cells[k] = p.cells[k];
      continue;
    }
    const auto& box = std::get<IntervalEntry>(orig.entries[k]);
    const auto& gens = std::get<PolytopicEntry>(converted.entries[k]).generators;
    std::vector<double> coeffs(box.lower.size(), 0.0);
    for (size_t g = 0; g < gens.size(); ++g) {
      double wgt = p.cells[k][g];
      if (wgt == 0.0) continue;
      for (size_t c = 0; c < coeffs.size(); ++c) {
        coeffs[c] += wgt * gens[g].coeff(static_cast<int>(c));
      }
    }
    out.cells[k] = std::move(coeffs);
  }
  return out;
}

Verdict check_single_matrix(const MatrixFamily& f, const Region& r,
                            const CheckerConfig& cfg) {
  Verdict v;
  v.diagnostics.families_checked = 1;
  Rng rng = Rng::stream(cfg.seed, 0);
  SampleParams params = random_params(f, rng);  // a point family has one member
  Polynomial d = det(sample(f, params));
  if (d.is_zero()) {
    v.status = Status::kUnstable;
    Witness w;
    w.params = params;
    w.location = kOutsidePoint;
    w.note = "determinant vanishes identically; every point is a root";
    v.witness = w;
    return v;
  }
  RootPlacement rp = classify_roots(d, r, cfg.marginal_root_tol);
  if (rp.stable) {
    v.status = Status::kStable;
    return v;
  }
  v.status = Status::kUnstable;
  Witness w;
  w.params = params;
  w.location = rp.offender;
  w.note = marginal_or_outside(rp.marginal);
  if (rp.marginal) v.diagnostics.marginal_hits = 1;
  v.witness = w;
  return v;
}

}  // namespace

Verdict family_stable(const MatrixFamily& f, const Region& r,
                      const CheckerConfig& cfg) {
  cfg.validate();
  f.validate();

  if (family_dimension(f) == 0) return check_single_matrix(f, r, cfg);

  // Heuristic degree precheck; the per-family corner certificate inside
  // critical_family_stable is the rigorous gate.
  DegreeReport dr = check_degree_invariant(f, 128, cfg.seed);
  if (!dr.constant) {
    Verdict v;
    v.status = Status::kInconclusive;
    Witness w;
    if (dr.witness) w.params = *dr.witness;
    w.note = "determinant degree varies across members";
    v.witness = w;
    v.diagnostics.exhausted = "degree invariance precheck";
    return v;
  }

  // Path selection: Kharitonov edges for interval families on the Hurwitz
  // region; everything else goes through the polytopic machinery (interval
  // entries become their corner polytopes).
  const bool interval_path = f.all_interval() && r.kind() == Region::Kind::kHurwitz;
  MatrixFamily converted;
  const MatrixFamily* base = &f;
  bool translated = false;
  CriticalEnumeration en = [&] {
    if (interval_path) return CriticalEnumeration::epsilon_b2(f);
    if (f.all_polytopic()) {
      bool all_two = true;
      for (const Entry& e : f.entries) {
        all_two = all_two && std::get<PolytopicEntry>(e).generators.size() == 2;
      }
      return all_two ? CriticalEnumeration::remark1(f) : CriticalEnumeration::epsilon_a(f);
    }
    converted = as_polytopic(f);
    base = &converted;
    translated = true;
    return CriticalEnumeration::epsilon_a(converted);
  }();

  std::uint64_t count = en.count();
  if (count > cfg.critical_budget) {
    throw CapacityError("critical subset exceeds the configured budget", count);
  }
  if (count == 0) return check_single_matrix(f, r, cfg);

  auto finalize_witness = [&](Witness w, const CriticalFamily& cf,
                              std::uint64_t index) {
    w.critical_index = index;
    if (!w.lambdas.empty()) {
      SampleParams params = critical_params(*base, cf, w.lambdas);
      w.params = translated ? translate_to_original(f, converted, params)
                            : std::move(params);
    }
    return w;
  };

  const std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();

#ifdef _OPENMP
  const bool parallel = cfg.threads != 1 && count > 1;
#else
  const bool parallel = false;
#endif

  Verdict out;
  if (!parallel) {
    Diagnostics agg;
    std::uint64_t first_inc = npos;
    std::string inc_reason;
    std::optional<Witness> inc_witness;
    for (std::uint64_t i = 0; i < count; ++i) {
      CriticalFamily cf = en.at(i);
      Verdict v = critical_family_stable(cf, r, cfg);
      if (v.status == Status::kUnstable) {
        out.status = Status::kUnstable;
        out.witness = finalize_witness(std::move(*v.witness), cf, i);
        out.diagnostics = v.diagnostics;
        out.diagnostics.families_checked = i + 1;
        return out;
      }
      agg.boundary_points += v.diagnostics.boundary_points;
      agg.subdivisions += v.diagnostics.subdivisions;
      agg.marginal_hits += v.diagnostics.marginal_hits;
      agg.max_depth_reached =
          std::max(agg.max_depth_reached, v.diagnostics.max_depth_reached);
      if (v.status == Status::kInconclusive && first_inc == npos) {
        first_inc = i;
        inc_reason = v.diagnostics.exhausted;
        inc_witness = v.witness;
      }
    }
    agg.families_checked = count;
    out.diagnostics = agg;
    if (first_inc != npos) {
      out.status = Status::kInconclusive;
      out.witness = inc_witness;
      out.diagnostics.exhausted = inc_reason;
    } else {
      out.status = Status::kStable;
    }
    return out;
  }

#ifdef _OPENMP
  // Parallel scan with a deterministic outcome: the reported witness is the
  // smallest unstable index regardless of thread timing, and aggregate
  // counters are only reported for complete scans (stable or inconclusive),
  // where summation order cannot change them.
  std::atomic<std::uint64_t> best_unstable{npos};
  struct Hit {
    std::uint64_t index;
    Witness witness;
    Diagnostics diag;
  };
  std::vector<Hit> hits;
  Diagnostics agg;
  std::uint64_t first_inc = npos;
  std::string inc_reason;
  std::optional<Witness> inc_witness;
  const std::uint64_t chunk = 16;
  const std::uint64_t nchunks = (count + chunk - 1) / chunk;

  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel
  {
    Diagnostics local;
    std::uint64_t local_inc = npos;
    std::string local_inc_reason;
    std::optional<Witness> local_inc_witness;
#pragma omp for schedule(dynamic, 1)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
      std::uint64_t start = static_cast<std::uint64_t>(c) * chunk;
      if (start >= best_unstable.load(std::memory_order_relaxed)) continue;
      std::uint64_t stop = std::min(count, start + chunk);
      for (std::uint64_t i = start; i < stop; ++i) {
        if (i >= best_unstable.load(std::memory_order_relaxed)) break;
        CriticalFamily cf = en.at(i);
        Verdict v = critical_family_stable(cf, r, cfg);
        if (v.status == Status::kUnstable) {
          std::uint64_t prev = best_unstable.load(std::memory_order_relaxed);
          while (i < prev &&
                 !best_unstable.compare_exchange_weak(prev, i, std::memory_order_relaxed)) {
          }
#pragma omp critical(polystab_family_hits)
          hits.push_back(Hit{i, finalize_witness(std::move(*v.witness), cf, i),
                             v.diagnostics});
          break;
        }
        local.boundary_points += v.diagnostics.boundary_points;
        local.subdivisions += v.diagnostics.subdivisions;
        local.marginal_hits += v.diagnostics.marginal_hits;
        local.max_depth_reached =
            std::max(local.max_depth_reached, v.diagnostics.max_depth_reached);
        if (v.status == Status::kInconclusive && i < local_inc) {
          local_inc = i;
          local_inc_reason = v.diagnostics.exhausted;
          local_inc_witness = v.witness;
        }
      }
    }
#pragma omp critical(polystab_family_merge)
    {
      agg.boundary_points += local.boundary_points;
      agg.subdivisions += local.subdivisions;
      agg.marginal_hits += local.marginal_hits;
      agg.max_depth_reached = std::max(agg.max_depth_reached, local.max_depth_reached);
      if (local_inc < first_inc) {
        first_inc = local_inc;
        inc_reason = local_inc_reason;
        inc_witness = local_inc_witness;
      }
    }
  }

  if (!hits.empty()) {
    size_t win = 0;
    for (size_t i = 1; i < hits.size(); ++i) {
      if (hits[i].index < hits[win].index) win = i;
    }
    out.status = Status::kUnstable;
    out.witness = std::move(hits[win].witness);
    out.diagnostics = hits[win].diag;
    out.diagnostics.families_checked = hits[win].index + 1;
    return out;
  }
  agg.families_checked = count;
  out.diagnostics = agg;
  if (first_inc != npos) {
    out.status = Status::kInconclusive;
    out.witness = inc_witness;
    out.diagnostics.exhausted = inc_reason;
  } else {
    out.status = Status::kStable;
  }
  return out;
#else
  return out;  // unreachable; the serial branch returned above
#endif
}

// ---------------------------------------------------------------------------
// monte_carlo_oracle
// ---------------------------------------------------------------------------

namespace {

// Per-cell vertex parameter choices for the falsifier: one-hot weights for
// polytopic cells, Kharitonov corner coefficient vectors for interval cells.
std::vector<std::vector<std::vector<double>>> vertex_choices(const MatrixFamily& f) {
  std::vector<std::vector<std::vector<double>>> out;
  out.reserve(f.entries.size());
  for (const Entry& e : f.entries) {
    std::vector<std::vector<double>> choices;
    if (const auto* pe = std::get_if<PolytopicEntry>(&e)) {
      for (const auto& [poly, idx] : vertex_set_indexed(*pe)) {
        std::vector<double> w(pe->generators.size(), 0.0);
        w[static_cast<size_t>(idx)] = 1.0;
        choices.push_back(std::move(w));
      }
    } else {
      const auto& ie = std::get<IntervalEntry>(e);
      for (const Polynomial& k : kharitonov_vertices(ie)) {
        std::vector<double> coeffs(ie.lower.size(), 0.0);
        for (size_t c = 0; c < coeffs.size(); ++c) coeffs[c] = k.coeff(static_cast<int>(c));
        if (std::find(choices.begin(), choices.end(), coeffs) == choices.end()) {
          choices.push_back(std::move(coeffs));
        }
      }
    }
    out.push_back(std::move(choices));
  }
  return out;
}

struct MemberCheck {
  bool unstable = false;
  bool marginal = false;
  std::complex<double> offender{0.0, 0.0};
  bool degenerate = false;  // determinant identically zero
};

MemberCheck check_member(const MatrixFamily& f, const SampleParams& params,
                         const Region& r, const CheckerConfig& cfg) {
  MemberCheck mc;
  Polynomial d = det(sample(f, params));
  if (d.is_zero()) {
    mc.unstable = true;
    mc.degenerate = true;
    mc.offender = kOutsidePoint;
    return mc;
  }
  RootPlacement rp = classify_roots(d, r, cfg.marginal_root_tol);
  if (!rp.stable) {
    mc.unstable = true;
    mc.marginal = rp.marginal;
    mc.offender = rp.offender;
  }
  return mc;
}

Witness member_witness(const SampleParams& params, const MemberCheck& mc) {
  Witness w;
  w.params = params;
  w.location = mc.offender;
  w.note = mc.degenerate ? "determinant vanishes identically; every point is a root"
                         : marginal_or_outside(mc.marginal);
  return w;
}

}  // namespace

Verdict monte_carlo_oracle(const MatrixFamily& f, const Region& r,
                           const CheckerConfig& cfg) {
  cfg.validate();
  f.validate();
  Verdict v;

  // All pure-vertex members first (capped), then the random stream. Sample
  // index i always draws from Rng::stream(seed, i), so the stream is
  // identical under any partitioning into workers.
  auto choices = vertex_choices(f);
  std::uint64_t vertex_total = 1;
  constexpr std::uint64_t kVertexCap = 1ull << 18;
  for (const auto& c : choices) {
    vertex_total = vertex_total * c.size();
    if (vertex_total > kVertexCap) break;
  }
  const bool exhaustive_vertices = vertex_total <= kVertexCap;

  std::uint64_t total = (exhaustive_vertices ? vertex_total : 0) +
                        static_cast<std::uint64_t>(cfg.oracle_samples);
  auto params_at = [&](std::uint64_t i) {
    if (exhaustive_vertices && i < vertex_total) {
      SampleParams p;
      p.cells.resize(choices.size());
      std::uint64_t rem = i;
      for (size_t k = 0; k < choices.size(); ++k) {
        std::uint64_t radix = choices[k].size();
        p.cells[k] = choices[k][static_cast<size_t>(rem % radix)];
        rem /= radix;
      }
      return p;
    }
    Rng rng = Rng::stream(cfg.seed, i);
    return random_params(f, rng);
  };

  const std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best = npos;
  Witness best_w;
  std::uint64_t marginal_hits = 0;

#ifdef _OPENMP
  const bool parallel = cfg.threads != 1 && total > 64;
#else
  const bool parallel = false;
#endif

  if (!parallel) {
    for (std::uint64_t i = 0; i < total; ++i) {
      SampleParams p = params_at(i);
      MemberCheck mc = check_member(f, p, r, cfg);
      if (mc.unstable) {
        best = i;
        best_w = member_witness(p, mc);
        if (mc.marginal) ++marginal_hits;
        break;
      }
    }
    v.diagnostics.samples = best == npos ? total : best + 1;
  } else {
#ifdef _OPENMP
    std::atomic<std::uint64_t> best_a{npos};
    struct Hit {
      std::uint64_t index;
      Witness witness;
      bool marginal;
    };
    std::vector<Hit> hits;
    const std::uint64_t chunk = 64;
    const std::uint64_t nchunks = (total + chunk - 1) / chunk;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
      std::uint64_t start = static_cast<std::uint64_t>(c) * chunk;
      if (start >= best_a.load(std::memory_order_relaxed)) continue;
      std::uint64_t stop = std::min(total, start + chunk);
      for (std::uint64_t i = start; i < stop; ++i) {
        if (i >= best_a.load(std::memory_order_relaxed)) break;
        SampleParams p = params_at(i);
        MemberCheck mc = check_member(f, p, r, cfg);
        if (!mc.unstable) continue;
        std::uint64_t prev = best_a.load(std::memory_order_relaxed);
        while (i < prev &&
               !best_a.compare_exchange_weak(prev, i, std::memory_order_relaxed)) {
        }
#pragma omp critical(polystab_oracle_hits)
        hits.push_back(Hit{i, member_witness(p, mc), mc.marginal});
        break;
      }
    }
    best = best_a.load();
    if (!hits.empty()) {
      size_t win = 0;
      for (size_t i = 1; i < hits.size(); ++i) {
        if (hits[i].index < hits[win].index) win = i;
      }
      best = hits[win].index;
      best_w = std::move(hits[win].witness);
      if (hits[win].marginal) marginal_hits = 1;
    }
    v.diagnostics.samples = best == npos ? total : best + 1;
#endif
  }

  v.diagnostics.families_checked = 1;
  v.diagnostics.marginal_hits = marginal_hits;
  if (best != npos) {
    v.status = Status::kUnstable;
    v.witness = std::move(best_w);
  } else {
    // One-sided: no counterexample among the members examined.
    v.status = Status::kStable;
  }
  return v;
}

// ---------------------------------------------------------------------------
// value sets, margins, witnesses, compare
// ---------------------------------------------------------------------------

namespace {

std::complex<double> matrix_value_at(const PolyMatrix& m, std::complex<double> z) {
  if (m.n == 1) return m.at(0, 0).evaluate(z);
  Eigen::MatrixXcd M(m.n, m.n);
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) M(i, j) = m.at(i, j).evaluate(z);
  }
  return M.determinant();
}

}  // namespace

std::vector<std::complex<double>> value_set(const MatrixFamily& f,
                                            std::complex<double> z, int samples,
                                            std::uint64_t seed) {
  f.validate();
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<size_t>(std::max(0, samples)));
  for (int i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    out.push_back(matrix_value_at(sample(f, random_params(f, rng)), z));
  }
  return out;
}

std::vector<std::complex<double>> value_set(const CriticalFamily& cf,
                                            std::complex<double> z, int samples,
                                            std::uint64_t seed) {
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<size_t>(std::max(0, samples)));
  std::vector<double> lambdas(static_cast<size_t>(cf.n));
  for (int i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    for (int s = 0; s < cf.n; ++s) lambdas[static_cast<size_t>(s)] = rng.uniform();
    out.push_back(matrix_value_at(cf.instantiate(lambdas), z));
  }
  return out;
}

namespace {

// Smallest |det| of one member over the boundary: a sweep plus the
// projections of the member's own roots onto the boundary, which is where
// the dips live.
double member_margin(const Polynomial& d, const Region& r, int sweep_count,
                     const CheckerConfig& cfg) {
  if (d.is_zero()) return 0.0;
  double limit = cfg.sweep_limit_multiplier * cauchy_root_bound(d);
  double m = kInf;
  for (const auto& z : r.boundary_points(sweep_count, limit)) {
    m = std::min(m, std::abs(d.evaluate(z)));
  }
  for (const auto& root : roots(d)) {
    m = std::min(m, std::abs(d.evaluate(project_to_boundary(r, root))));
  }
  return m;
}

}  // namespace

double boundary_margin_probe(const MatrixFamily& f, const Region& r,
                             const CheckerConfig& cfg) {
  cfg.validate();
  f.validate();
  constexpr int kSweep = 128;
  double m = kInf;

  auto choices = vertex_choices(f);
  std::uint64_t vertex_total = 1;
  constexpr std::uint64_t kCap = 256;
  for (const auto& c : choices) {
    vertex_total = vertex_total * c.size();
    if (vertex_total > kCap) break;
  }
  if (vertex_total <= kCap) {
    for (std::uint64_t i = 0; i < vertex_total; ++i) {
      SampleParams p;
      p.cells.resize(choices.size());
      std::uint64_t rem = i;
      for (size_t k = 0; k < choices.size(); ++k) {
        std::uint64_t radix = choices[k].size();
        p.cells[k] = choices[k][static_cast<size_t>(rem % radix)];
        rem /= radix;
      }
      m = std::min(m, member_margin(det(sample(f, p)), r, kSweep, cfg));
    }
  }
  int random_members = std::clamp(cfg.oracle_samples / 256, 16, 64);
  for (int i = 0; i < random_members; ++i) {
    Rng rng = Rng::stream(cfg.seed ^ 0x6d617267u, static_cast<std::uint64_t>(i));
    m = std::min(m, member_margin(det(sample(f, random_params(f, rng))), r, kSweep, cfg));
  }
  return m;
}

bool confirm_witness(const MatrixFamily& f, const Witness& w, const Region& r,
                     double tol) {
  if (!w.params) return false;
  Polynomial d = det(sample(f, *w.params));
  if (d.is_zero()) return true;
  RootPlacement rp = classify_roots(d, r, tol);
  return !rp.stable;
}

CompareOutcome compare_family(const MatrixFamily& f, const Region& r,
                              const CheckerConfig& cfg) {
  CompareOutcome out;
  out.check = family_stable(f, r, cfg);
  out.oracle = monte_carlo_oracle(f, r, cfg);
  out.margin = boundary_margin_probe(f, r, cfg);

  // Witness members are the most marginal members we know; fold their own
  // boundary margins in so near-boundary instabilities classify as marginal
  // even when random probing missed the dip.
  for (const Verdict* v : {&out.check, &out.oracle}) {
    if (v->witness && v->witness->params) {
      Polynomial d = det(sample(f, *v->witness->params));
      out.margin = std::min(out.margin, member_margin(d, r, 128, cfg));
    }
  }
  out.marginal_band = out.margin < 10.0 * cfg.epsilon_exclusion;

  const Status cs = out.check.status, os = out.oracle.status;
  if (cs == Status::kUnstable && os == Status::kUnstable) {
    out.agree = true;
  } else if (cs == Status::kStable && os == Status::kStable) {
    out.agree = true;
  } else if (cs == Status::kUnstable && os == Status::kStable) {
    // The oracle is one-sided; the theorem path wins if its witness is real.
    out.agree = confirm_witness(f, *out.check.witness, r, cfg.marginal_root_tol);
  } else {
    // Oracle found a counterexample the theorem path missed, or the theorem
    // path gave up: a bug or a marginal case, and the caller sees which.
    out.agree = false;
  }
  return out;
}

}  // namespace polystab
