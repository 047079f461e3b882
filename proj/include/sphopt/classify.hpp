#pragma once

// First/second-order classification of points on the sphere from the
// spectrum of the Hessian restricted to the tangent space x^perp.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sphopt/critsolve.hpp"

namespace sphopt {

enum class Verdict { NotCritical, FoncOnly, SoncDegenerate, Sosc };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NotCritical: return "NOT_CRITICAL";
    case Verdict::FoncOnly: return "FONC_ONLY";
    case Verdict::SoncDegenerate: return "SONC_DEGENERATE";
    case Verdict::Sosc: return "SOSC";
  }
  return "?";
}

inline double class_tolerance(const HomogeneousPolynomial& f, double tol_class = 1e-7) {
  return tol_class * std::max(1.0, f.coefficient_norm());
}

struct TangentSpectrum {
  Matrix basis;         ///< n x (n-1), orthonormal columns spanning x^perp
  Vector eigenvalues;   ///< ascending
  Matrix eigenvectors;  ///< n x (n-1), column k is the unit tangent vector for eigenvalues[k]
};

struct ClassifiedPoint {
  CriticalPair pair;
  TangentSpectrum spectrum;
  /// smallest tangent eigenvalue minus lambda; +inf when n = 1
  double sosc_margin = 0.0;
  Verdict verdict = Verdict::NotCritical;
};

/// Columns 2..n of the Householder reflection that maps e1 to -+x.
inline Matrix tangent_basis(const Vector& x) {
  const auto n = x.size();
  Vector v = x;
  v[0] += (x[0] >= 0.0 ? 1.0 : -1.0);
  Matrix h = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
  return h.rightCols(n - 1);
}

namespace detail {

inline void require_unit(const Vector& x) {
  if (std::abs(x.norm() - 1.0) > 1e-10) {
    throw InputError("point must lie on the unit sphere (|x| = " + std::to_string(x.norm()) + ")");
  }
}

}  // namespace detail

/// Spectrum of B^T hess f(x) B for an explicit orthonormal basis B of x^perp.
inline TangentSpectrum tangent_spectrum_in_basis(const HomogeneousPolynomial& f, const Vector& x, const Matrix& basis) {
  TangentSpectrum ts;
  ts.basis = basis;
  const auto m = basis.cols();
  if (m == 0) {
    ts.eigenvalues = Vector(0);
    ts.eigenvectors = Matrix(x.size(), 0);
    return ts;
  }
  const Matrix reduced = basis.transpose() * hessian(f, x) * basis;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (reduced + reduced.transpose()));
  ts.eigenvalues = es.eigenvalues();
  ts.eigenvectors = basis * es.eigenvectors();
  return ts;
}

inline TangentSpectrum tangent_spectrum(const HomogeneousPolynomial& f, const Vector& x) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  detail::require_unit(x);
  return tangent_spectrum_in_basis(f, x, tangent_basis(x));
}

inline Verdict verdict_for(double residual, double margin, double crit_tol, double class_tol) {
  if (residual > crit_tol) return Verdict::NotCritical;
  if (margin > class_tol) return Verdict::Sosc;
  if (margin < -class_tol) return Verdict::FoncOnly;
  return Verdict::SoncDegenerate;
}

inline ClassifiedPoint classify_point(const HomogeneousPolynomial& f, const Vector& x, const Tolerances& tol = {}) {
  require_nonzero(f);
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  detail::require_unit(x);
  ClassifiedPoint cp;
  cp.pair.x = x;
  cp.pair.lambda = f.degree() * evaluate(f, x);
  cp.pair.residual = (gradient(f, x) - cp.pair.lambda * x).norm();
  cp.pair.sphere_residual = std::abs(x.squaredNorm() - 1.0);
  cp.spectrum = tangent_spectrum(f, x);
  cp.sosc_margin = cp.spectrum.eigenvalues.size() == 0
                       ? std::numeric_limits<double>::infinity()
                       : cp.spectrum.eigenvalues[0] - cp.pair.lambda;
  cp.verdict = verdict_for(cp.pair.residual, cp.sosc_margin, crit_tolerance(f, tol.tol_crit),
                           class_tolerance(f, tol.tol_class));
  return cp;
}

struct AnalysisConfig {
  CritConfig search;
  Tolerances tol;
};

/// Multistart search followed by classification of every pair found.
inline std::vector<ClassifiedPoint> classify_all(const HomogeneousPolynomial& f, const AnalysisConfig& cfg = {}) {
  CritConfig search = cfg.search;
  search.tol_crit = cfg.tol.tol_crit;
  const CriticalSet set = find_critical_pairs(f, search);
  std::vector<ClassifiedPoint> out;
  out.reserve(set.pairs.size());
  for (const auto& p : set.pairs) {
    ClassifiedPoint cp = classify_point(f, p.x, cfg.tol);
    cp.pair = p;
    out.push_back(std::move(cp));
  }
  return out;
}

inline std::size_t count_verdict(const std::vector<ClassifiedPoint>& pts, Verdict v) {
  return static_cast<std::size_t>(
      std::count_if(pts.begin(), pts.end(), [v](const ClassifiedPoint& p) { return p.verdict == v; }));
}

}  // namespace sphopt
