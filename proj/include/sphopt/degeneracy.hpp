#pragma once

// Detection of SONC points where the SOSC fails. Three views of the same
// locus are provided: the rank <= 2 witness matrix
//
//     [ grad f(x)     x   0 ]
//     [ hess f(x) y   y   x ] ,  y^T x = 0,
//
// the bordered Hessian H(x, lambda) = [[hess f - lambda I, x], [x^T, 0]]
// whose determinant must vanish there, and for quadratics the multiplicity
// of the least eigenvalue. For n = 2 an exact decision over C is made from
// the 3x3 minors of the witness matrix.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "sphopt/binary_forms.hpp"
#include "sphopt/classify.hpp"

namespace sphopt {

struct WitnessMatrix {
  Matrix m;                ///< 2n x 3
  Vector singular_values;  ///< descending
};

inline WitnessMatrix build_witness_matrix(const HomogeneousPolynomial& f, const Vector& x, const Vector& y) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  detail::check_dim(f, static_cast<std::size_t>(y.size()));
  if (x.norm() == 0.0) throw InputError("witness matrix needs x != 0");
  const auto n = x.size();
  WitnessMatrix w;
  w.m = Matrix::Zero(2 * n, 3);
  w.m.col(0).head(n) = gradient(f, x);
  w.m.col(0).tail(n) = hessian(f, x) * y;
  w.m.col(1).head(n) = x;
  w.m.col(1).tail(n) = y;
  w.m.col(2).tail(n) = x;
  w.singular_values = Eigen::JacobiSVD<Matrix>(w.m).singularValues();
  return w;
}

struct BorderedMatrix {
  Matrix h;  ///< (n+1) x (n+1), symmetric
  double det = 0.0;
  /// (max(1, |f|) + |hess f - lambda I|_2)^(n-1). For unit x,
  /// det H = -det(B^T (hess f - lambda I) B), a form of degree n-1.
  double scale = 1.0;
};

inline BorderedMatrix bordered_matrix(const HomogeneousPolynomial& f, const Vector& x, double lambda) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  const auto n = x.size();
  BorderedMatrix b;
  b.h = Matrix::Zero(n + 1, n + 1);
  b.h.topLeftCorner(n, n) = hessian(f, x);
  b.h.topLeftCorner(n, n).diagonal().array() -= lambda;
  b.h.col(n).head(n) = x;
  b.h.row(n).head(n) = x.transpose();
  b.det = Eigen::PartialPivLU<Matrix>(b.h).determinant();
  const Matrix shifted = b.h.topLeftCorner(n, n);
  const double op_norm =
      Eigen::SelfAdjointEigenSolver<Matrix>(shifted, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  b.scale = std::pow(std::max(1.0, f.coefficient_norm()) + op_norm, static_cast<double>(n - 1));
  return b;
}

inline double bordered_determinant(const HomogeneousPolynomial& f, const Vector& x, double lambda) {
  return bordered_matrix(f, x, lambda).det;
}

/// |det H| <= tol_det * scale.
inline bool bordered_singular(const BorderedMatrix& b, double tol_det = 1e-8) {
  return std::abs(b.det) <= tol_det * b.scale;
}

struct DegeneracyWitness {
  Vector x;
  Vector y;  ///< unit, orthogonal to x
  double lambda = 0.0;
  double mu = 0.0;  ///< hess f(x) y - lambda y = mu x in the least-squares sense
  double rank_defect_measure = 0.0;  ///< third singular value of the witness matrix
  double largest_singular_value = 0.0;
  bool rank_verified = false;  ///< third <= tol_rank * largest
  double bordered_residual = 0.0;  ///< |H(x, lambda) (y, -mu)|
  double bordered_det = 0.0;
  double det_scale = 0.0;
};

/// Witness for a real degenerate SONC point, or nothing when the SOSC holds
/// (or the point is not even SONC). Throws NotCriticalError off the FONC set.
inline std::optional<DegeneracyWitness> detect_sosc_failure(const HomogeneousPolynomial& f, const Vector& x,
                                                            const Tolerances& tol = {}) {
  const ClassifiedPoint cp = classify_point(f, x, tol);
  if (cp.verdict == Verdict::NotCritical) {
    throw NotCriticalError("point is not critical: FONC residual " + std::to_string(cp.pair.residual),
                           cp.pair.residual);
  }
  if (cp.verdict != Verdict::SoncDegenerate) return std::nullopt;

  DegeneracyWitness w;
  w.x = x;
  w.lambda = cp.pair.lambda;
  w.y = cp.spectrum.eigenvectors.col(0);
  w.y -= x.dot(w.y) * x;
  w.y.normalize();
  const Matrix hess = hessian(f, x);
  const Vector shifted = hess * w.y - w.lambda * w.y;
  w.mu = x.dot(shifted) / x.squaredNorm();

  const WitnessMatrix wm = build_witness_matrix(f, x, w.y);
  w.largest_singular_value = wm.singular_values[0];
  w.rank_defect_measure = wm.singular_values[2];
  w.rank_verified = w.rank_defect_measure <= tol.tol_rank * w.largest_singular_value;

  const BorderedMatrix b = bordered_matrix(f, x, w.lambda);
  Vector ym(x.size() + 1);
  ym << w.y, -w.mu;
  w.bordered_residual = (b.h * ym).norm();
  w.bordered_det = b.det;
  w.det_scale = b.scale;
  return w;
}

/// What a witness pair (x, y) alone says about x: the least-squares FONC
/// residual and the second-order quantity along y.
struct WitnessReconstruction {
  double lambda = 0.0;
  double fonc_residual = 0.0;
  double sosc_margin = 0.0;  ///< y^T hess y / |y|^2 - lambda
};

inline WitnessReconstruction reconstruct_from_witness(const HomogeneousPolynomial& f, const Vector& x,
                                                      const Vector& y) {
  WitnessReconstruction r;
  const Vector g = gradient(f, x);
  r.lambda = x.dot(g) / x.squaredNorm();
  r.fonc_residual = (g - r.lambda * x).norm();
  r.sosc_margin = y.dot(hessian(f, x) * y) / y.squaredNorm() - r.lambda;
  return r;
}

/// Third singular value of the witness matrix for every tangent eigenvector
/// y at x, paired with the rank threshold tol_rank * sigma_1.
struct TangentWitnessScan {
  std::vector<double> third_singular_values;
  std::vector<double> thresholds;
  bool any_rank_deficient = false;
};

inline TangentWitnessScan scan_tangent_witnesses(const HomogeneousPolynomial& f, const Vector& x,
                                                 const Tolerances& tol = {}) {
  TangentWitnessScan scan;
  const TangentSpectrum ts = tangent_spectrum(f, x);
  for (Eigen::Index k = 0; k < ts.eigenvectors.cols(); ++k) {
    const WitnessMatrix wm = build_witness_matrix(f, x, ts.eigenvectors.col(k));
    const double thr = tol.tol_rank * wm.singular_values[0];
    scan.third_singular_values.push_back(wm.singular_values[2]);
    scan.thresholds.push_back(thr);
    if (wm.singular_values[2] <= thr) scan.any_rank_deficient = true;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Quadratic case

struct QuadraticDegeneracy {
  bool degenerate = false;
  int lambda1_multiplicity = 0;
  Vector eigenvalues;  ///< ascending
};

/// The least eigenvalue of symmetric A is repeated (within tol_eig |A|_F).
inline QuadraticDegeneracy quadratic_degeneracy(const Matrix& a, double tol_eig = 1e-8) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InputError("quadratic_degeneracy needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  QuadraticDegeneracy q;
  q.eigenvalues = es.eigenvalues();
  const double tol = tol_eig * a.norm();
  q.lambda1_multiplicity = 0;
  for (Eigen::Index k = 0; k < q.eigenvalues.size(); ++k) {
    if (q.eigenvalues[k] - q.eigenvalues[0] <= tol) ++q.lambda1_multiplicity;
  }
  q.degenerate = q.lambda1_multiplicity >= 2;
  return q;
}

// ---------------------------------------------------------------------------
// Exact decision for n = 2

struct OracleResult {
  bool on_locus = false;
  bool minors_identically_zero = false;
  bool root_at_infinity = false;  ///< common root x = (1, 0)
  int gcd_degree = 0;             ///< common factor of the minors restricted to x2 = 1
  std::string certificate;
};

namespace detail {

using QForm = BinaryForm<Rational>;

inline QForm rational_partial(const HomogeneousPolynomial& f, int di, int dj) {
  // d^(di+dj) f / dx1^di dx2^dj as a binary form of degree d - di - dj.
  const int deg = f.degree() - di - dj;
  QForm r(deg);
  for (const auto& [e, c] : f.terms()) {
    const int a = e[0];
    const int b = e[1];
    if (a < di || b < dj) continue;
    long long factor = 1;
    for (int k = 0; k < di; ++k) factor *= (a - k);
    for (int k = 0; k < dj; ++k) factor *= (b - k);
    r[a - di] += Rational(factor) * exact_rational(c);
  }
  return r;
}

inline QForm det3(const QForm m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

/// The four 3x3 minors of the 4x3 witness matrix with y = (x2, -x1), as
/// binary forms of degree d + 1 with exact rational coefficients.
inline std::vector<BinaryForm<Rational>> witness_minors_n2(const HomogeneousPolynomial& f) {
  using detail::QForm;
  if (f.num_vars() != 2) throw InputError("exact oracle is only available for n = 2");
  const int d = f.degree();
  const QForm x1 = QForm::x1();
  const QForm x2 = QForm::x2();
  const QForm y1 = x2;
  const QForm y2 = -x1;
  const QForm f1 = detail::rational_partial(f, 1, 0);
  const QForm f2 = detail::rational_partial(f, 0, 1);
  QForm h1(d - 1);
  QForm h2(d - 1);
  if (d >= 2) {
    const QForm f11 = detail::rational_partial(f, 2, 0);
    const QForm f12 = detail::rational_partial(f, 1, 1);
    const QForm f22 = detail::rational_partial(f, 0, 2);
    h1 = f11 * y1 + f12 * y2;
    h2 = f12 * y1 + f22 * y2;
  }
  const QForm zero(1);
  const QForm rows[4][3] = {{f1, x1, zero}, {f2, x2, zero}, {h1, y1, x1}, {h2, y2, x2}};
  std::vector<QForm> minors;
  for (int skip = 0; skip < 4; ++skip) {
    QForm m[3][3];
    int r = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip) continue;
      for (int j = 0; j < 3; ++j) m[r][j] = rows[i][j];
      ++r;
    }
    minors.push_back(detail::det3(m));
  }
  return minors;
}

/// Decides over C whether some x != 0 (with y = (x2, -x1)) makes every 3x3
/// minor vanish. Arithmetic is exact: double coefficients are dyadic
/// rationals.
inline OracleResult exact_oracle_n2(const HomogeneousPolynomial& f) {
  require_nonzero(f);
  const auto minors = witness_minors_n2(f);
  OracleResult res;

  std::vector<const BinaryForm<Rational>*> nonzero;
  for (const auto& m : minors) {
    if (!m.is_zero()) nonzero.push_back(&m);
  }
  if (nonzero.empty()) {
    res.on_locus = true;
    res.minors_identically_zero = true;
    res.certificate = "all 3x3 minors vanish identically: every x is a witness";
    return res;
  }

  res.root_at_infinity = std::all_of(nonzero.begin(), nonzero.end(),
                                     [](const BinaryForm<Rational>* m) { return m->at_infinity() == 0; });

  Univariate<Rational> g;
  for (const auto* m : nonzero) g = poly_gcd(g, dehomogenize(*m));
  res.gcd_degree = g.empty() ? 0 : static_cast<int>(g.size()) - 1;

  res.on_locus = res.root_at_infinity || res.gcd_degree >= 1;
  if (res.gcd_degree >= 1) {
    res.certificate = "minors share the factor " + describe_univariate(g) + " in t = x1/x2";
    if (res.root_at_infinity) res.certificate += "; they also vanish at x = (1, 0)";
  } else if (res.root_at_infinity) {
    res.certificate = "minors share the root x = (1, 0)";
  } else {
    res.certificate = "minors have no common projective root";
  }
  return res;
}

}  // namespace sphopt
