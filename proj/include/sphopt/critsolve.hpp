#pragma once

// Real critical pairs (x, lambda) of f on the unit sphere, i.e. solutions of
// grad f(x) = lambda x with |x| = 1. Multistart damped Newton for any n, plus
// an exact enumeration for n = 2 through the roots of the binary form
// x2 df/dx1 - x1 df/dx2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "sphopt/polyhom.hpp"

namespace sphopt {

struct CritConfig {
  int starts = 0;  ///< 0 selects default_starts(n, d)
  std::uint64_t seed = 0;
  double tol_crit = 1e-9;  ///< scaled by max(1, |f|)
  double dedup_radius = 1e-6;
  int max_iterations = 100;
  int max_halvings = 30;
};

inline int default_starts(int n, int d) { return std::min(50 * d * n, 20000); }

/// Absolute FONC tolerance for f.
inline double crit_tolerance(const HomogeneousPolynomial& f, double tol_crit = 1e-9) {
  return tol_crit * std::max(1.0, f.coefficient_norm());
}

struct CriticalPair {
  Vector x;
  double lambda = 0.0;
  double residual = 0.0;         ///< |grad f(x) - lambda x|
  double sphere_residual = 0.0;  ///< ||x|^2 - 1|
};

struct CriticalSet {
  std::vector<CriticalPair> pairs;
  double dedup_radius = 1e-6;
  int starts_used = 0;
  double converged_fraction = 0.0;
  /// Set by the n = 2 oracle when the binary form vanishes identically.
  bool all_points_critical = false;
};

/// Normalizes x and attaches lambda = d f(x) and both residuals.
inline CriticalPair make_pair(const HomogeneousPolynomial& f, const Vector& x_in) {
  CriticalPair p;
  p.x = x_in / x_in.norm();
  p.lambda = f.degree() * evaluate(f, p.x);
  p.residual = (gradient(f, p.x) - p.lambda * p.x).norm();
  p.sphere_residual = std::abs(p.x.squaredNorm() - 1.0);
  return p;
}

/// The antipode is critical too: grad f(-x) = (-1)^(d-1) grad f(x).
inline CriticalPair antipode(const HomogeneousPolynomial& f, const CriticalPair& p) {
  CriticalPair q = p;
  q.x = -p.x;
  q.lambda = (f.degree() % 2 == 0) ? p.lambda : -p.lambda;
  return q;
}

/// Insert unless a stored point lies within radius; on collision the smaller
/// residual wins.
inline void insert_dedup(std::vector<CriticalPair>& pairs, CriticalPair p, double radius) {
  for (auto& q : pairs) {
    if ((q.x - p.x).norm() <= radius) {
      if (p.residual < q.residual) q = std::move(p);
      return;
    }
  }
  pairs.push_back(std::move(p));
}

inline void sort_pairs(std::vector<CriticalPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const CriticalPair& a, const CriticalPair& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return std::lexicographical_compare(a.x.data(), a.x.data() + a.x.size(), b.x.data(),
                                        b.x.data() + b.x.size());
  });
}

namespace detail {

struct NewtonSystem {
  const HomogeneousPolynomial& f;

  Vector residual(const Vector& x, double lambda) const {
    const auto n = x.size();
    Vector r(n + 1);
    r.head(n) = gradient(f, x) - lambda * x;
    r[n] = 0.5 * (x.squaredNorm() - 1.0);
    return r;
  }

  Matrix jacobian(const Vector& x, double lambda) const {
    const auto n = x.size();
    Matrix j = Matrix::Zero(n + 1, n + 1);
    j.topLeftCorner(n, n) = hessian(f, x);
    j.topLeftCorner(n, n).diagonal().array() -= lambda;
    j.col(n).head(n) = -x;
    j.row(n).head(n) = x.transpose();
    return j;
  }
};

}  // namespace detail

/// Newton on F(x, lambda) = (grad f - lambda x, (x.x - 1)/2) from x0. Iterates
/// are projected back to the sphere with lambda = d f(x), and a step is kept
/// only when it shrinks the FONC residual |grad f(x) - d f(x) x|. That merit
/// has no rounding floor near zeros of grad f, so multiple roots still
/// converge (linearly) instead of stalling at sqrt(eps).
inline std::optional<CriticalPair> newton_from(const HomogeneousPolynomial& f, const Vector& x0,
                                               const CritConfig& cfg) {
  const double tol = crit_tolerance(f, cfg.tol_crit);
  const double scale = std::max(1.0, f.coefficient_norm());
  const auto n = x0.size();
  detail::NewtonSystem sys{f};

  if (!x0.allFinite() || x0.norm() == 0.0) return std::nullopt;
  CriticalPair cur = make_pair(f, x0);

  for (int it = 0; it < cfg.max_iterations && cur.residual > 0.0; ++it) {
    // Minimum-norm step: on non-isolated critical sets the Jacobian is
    // rank-deficient and the plain Newton step does not exist.
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys.jacobian(cur.x, cur.lambda));
    const Vector step = cod.solve(-sys.residual(cur.x, cur.lambda)).head(n);
    if (!step.allFinite() || step.norm() == 0.0) break;

    double t = 1.0;
    bool improved = false;
    CriticalPair trial;
    for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
      const Vector x_try = cur.x + t * step;
      if (x_try.norm() == 0.0) continue;
      trial = make_pair(f, x_try);
      if (trial.residual < cur.residual) {
        improved = true;
        break;
      }
      // At the rounding floor a full step cannot help; halving won't either.
      if (cur.residual <= 1e-13 * scale) break;
    }
    if (!improved) break;
    cur = std::move(trial);
    if (t * step.norm() <= 1e-15) break;
  }
  if (cur.residual <= tol && cur.sphere_residual <= 1e-12) return cur;
  return std::nullopt;
}

/// Uniform point on S^{n-1} from a normalized Gaussian draw.
inline Vector random_unit_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

inline CriticalSet find_critical_pairs(const HomogeneousPolynomial& f, const CritConfig& cfg = {}) {
  require_nonzero(f);
  const int n = f.num_vars();
  const int starts = cfg.starts > 0 ? cfg.starts : default_starts(n, f.degree());

  CriticalSet set;
  set.dedup_radius = cfg.dedup_radius;
  set.starts_used = starts;
  int converged = 0;
  for (int s = 0; s < starts; ++s) {
    const Vector x0 = random_unit_vector(n, derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    auto p = newton_from(f, x0, cfg);
    if (!p) continue;
    ++converged;
    CriticalPair q = antipode(f, *p);
    insert_dedup(set.pairs, std::move(*p), cfg.dedup_radius);
    insert_dedup(set.pairs, std::move(q), cfg.dedup_radius);
  }
  set.converged_fraction = static_cast<double>(converged) / starts;
  sort_pairs(set.pairs);
  return set;
}

// ---------------------------------------------------------------------------
// Exact enumeration for n = 2

/// Coefficients c_k of the binary form x2 df/dx1 - x1 df/dx2 on x1^k x2^(d-k).
inline std::vector<double> critical_binary_form(const HomogeneousPolynomial& f) {
  if (f.num_vars() != 2) throw InputError("binary form oracle needs n = 2");
  const int d = f.degree();
  std::vector<double> g(static_cast<std::size_t>(d + 1), 0.0);
  for (const auto& [e, c] : f.terms()) {
    const int a = e[0];
    const int b = e[1];
    if (a > 0) g[static_cast<std::size_t>(a - 1)] += a * c;
    if (b > 0) g[static_cast<std::size_t>(a + 1)] -= b * c;
  }
  return g;
}

namespace detail {

inline double binary_form_eval(const std::vector<double>& g, double x1, double x2, double* dtheta) {
  // Value and derivative along the circle (cos t, sin t) -> (-x2, x1).
  const int d = static_cast<int>(g.size()) - 1;
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  for (int k = 0; k <= d; ++k) {
    const double c = g[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    v += c * std::pow(x1, k) * std::pow(x2, d - k);
    if (k > 0) d1 += c * k * std::pow(x1, k - 1) * std::pow(x2, d - k);
    if (k < d) d2 += c * (d - k) * std::pow(x1, k) * std::pow(x2, d - k - 1);
  }
  if (dtheta) *dtheta = -x2 * d1 + x1 * d2;
  return v;
}

/// Newton in the angle, accepting only steps that shrink |g|.
inline Vector polish_direction(const std::vector<double>& g, Vector x) {
  double theta = std::atan2(x[1], x[0]);
  double dv = 0.0;
  double v = binary_form_eval(g, std::cos(theta), std::sin(theta), &dv);
  for (int it = 0; it < 40 && v != 0.0 && dv != 0.0; ++it) {
    const double cand = theta - v / dv;
    double dc = 0.0;
    const double vc = binary_form_eval(g, std::cos(cand), std::sin(cand), &dc);
    if (!(std::abs(vc) < std::abs(v))) break;
    theta = cand;
    v = vc;
    dv = dc;
  }
  x << std::cos(theta), std::sin(theta);
  return x;
}

}  // namespace detail

/// Real root directions of the binary form g (unit vectors, one per
/// projective root). Roots at x2 = 0 are detected from the leading
/// coefficient; the rest from companion-matrix eigenvalues of g(t, 1).
inline std::vector<Vector> binary_form_real_directions(const std::vector<double>& g, double imag_tol = 1e-8) {
  std::vector<Vector> dirs;
  double gnorm = 0.0;
  for (double c : g) gnorm += c * c;
  gnorm = std::sqrt(gnorm);
  if (gnorm == 0.0) return dirs;
  const double zero = 1e-12 * gnorm;

  int top = static_cast<int>(g.size()) - 1;
  while (top >= 0 && std::abs(g[static_cast<std::size_t>(top)]) <= zero) --top;
  if (top < static_cast<int>(g.size()) - 1) {
    Vector e1(2);
    e1 << 1.0, 0.0;
    dirs.push_back(e1);
  }
  if (top >= 1) {
    Matrix comp = Matrix::Zero(top, top);
    const double lead = g[static_cast<std::size_t>(top)];
    for (int k = 0; k < top; ++k) comp(0, top - 1 - k) = -g[static_cast<std::size_t>(k)] / lead;
    for (int k = 1; k < top; ++k) comp(k, k - 1) = 1.0;
    Eigen::EigenSolver<Matrix> es(comp, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const std::complex<double> z = es.eigenvalues()[k];
      if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z))) continue;
      Vector x(2);
      x << z.real(), 1.0;
      dirs.push_back(detail::polish_direction(g, x / x.norm()));
    }
  }
  return dirs;
}

inline CriticalSet enumerate_critical_pairs_n2(const HomogeneousPolynomial& f, double dedup_radius = 1e-6) {
  require_nonzero(f);
  if (f.num_vars() != 2) throw InputError("exact enumeration is only available for n = 2");
  CriticalSet set;
  set.dedup_radius = dedup_radius;
  set.converged_fraction = 1.0;

  const auto g = critical_binary_form(f);
  double gnorm = 0.0;
  for (double c : g) gnorm += c * c;
  if (std::sqrt(gnorm) <= 1e-12 * f.degree() * std::max(1.0, f.coefficient_norm())) {
    set.all_points_critical = true;
    return set;
  }
  for (const Vector& x : binary_form_real_directions(g)) {
    CriticalPair p = make_pair(f, x);
    CriticalPair q = antipode(f, p);
    insert_dedup(set.pairs, std::move(p), dedup_radius);
    insert_dedup(set.pairs, std::move(q), dedup_radius);
  }
  sort_pairs(set.pairs);
  return set;
}

struct CertificationReport {
  bool certified = false;
  bool all_points_critical = false;  ///< radial f; nothing to certify
  std::size_t multistart_count = 0;
  std::size_t oracle_count = 0;
  std::vector<CriticalPair> only_multistart;
  std::vector<CriticalPair> only_oracle;
};

/// Runs both finders on an n = 2 polynomial and lists pairs seen by only one.
inline CertificationReport certify_against_oracle(const HomogeneousPolynomial& f, const CritConfig& cfg = {}) {
  if (f.num_vars() != 2) throw InputError("oracle certification needs n = 2");
  CertificationReport rep;
  const CriticalSet exact = enumerate_critical_pairs_n2(f, cfg.dedup_radius);
  const CriticalSet multi = find_critical_pairs(f, cfg);
  rep.multistart_count = multi.pairs.size();
  rep.oracle_count = exact.pairs.size();
  if (exact.all_points_critical) {
    rep.all_points_critical = true;
    return rep;
  }
  const double radius = 10.0 * cfg.dedup_radius;
  const double ltol = 10.0 * crit_tolerance(f, cfg.tol_crit);
  const auto matches = [&](const CriticalPair& a, const std::vector<CriticalPair>& pool) {
    return std::any_of(pool.begin(), pool.end(), [&](const CriticalPair& b) {
      return (a.x - b.x).norm() <= radius && std::abs(a.lambda - b.lambda) <= ltol;
    });
  };
  for (const auto& p : multi.pairs) {
    if (!matches(p, exact.pairs)) rep.only_multistart.push_back(p);
  }
  for (const auto& p : exact.pairs) {
    if (!matches(p, multi.pairs)) rep.only_oracle.push_back(p);
  }
  rep.certified = rep.only_multistart.empty() && rep.only_oracle.empty();
  return rep;
}

}  // namespace sphopt
