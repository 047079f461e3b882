#pragma once

// Homogeneous polynomials in n variables: representation, evaluation,
// exact first and second derivatives, and seeded random generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sphopt/common.hpp"

namespace sphopt {

using Exponents = std::vector<int>;

/// Graded lexicographic order among monomials of one fixed degree.
/// With equal total degree this reduces to lexicographic order with larger
/// leading exponents first: x1^2 < x1 x2 < x2^2.
struct GrlexOrder {
  bool operator()(const Exponents& a, const Exponents& b) const { return a > b; }
};

using TermMap = std::map<Exponents, double, GrlexOrder>;

inline std::string format_exponents(const Exponents& e) {
  std::string s = "[";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + "]";
}

/// Number of monomials of degree d in n variables, binomial(n+d-1, d).
inline std::size_t monomial_count(int n, int d) {
  std::size_t r = 1;
  for (int k = 1; k <= d; ++k) r = r * static_cast<std::size_t>(n - 1 + k) / static_cast<std::size_t>(k);
  return r;
}

/// All exponent vectors of total degree d in n variables, in grlex order.
inline std::vector<Exponents> monomials(int n, int d) {
  std::vector<Exponents> out;
  if (n < 1 || d < 0) return out;
  Exponents e(static_cast<std::size_t>(n), 0);
  // Recursive fill: leading variable takes the largest share first.
  auto rec = [&](auto&& self, int i, int remaining) -> void {
    if (i == n - 1) {
      e[static_cast<std::size_t>(i)] = remaining;
      out.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[static_cast<std::size_t>(i)] = k;
      self(self, i + 1, remaining - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

class HomogeneousPolynomial {
 public:
  /// The zero polynomial of the given shape.
  HomogeneousPolynomial(int n, int d) : n_(n), d_(d) { check_shape(n, d); }

  /// Validates every term; rejects wrong lengths, negative exponents, exponent
  /// sums different from d and duplicate monomials.
  static HomogeneousPolynomial from_terms(int n, int d,
                                          const std::vector<std::pair<Exponents, double>>& terms) {
    HomogeneousPolynomial p(n, d);
    for (const auto& [e, c] : terms) {
      p.validate_term(e);
      if (!std::isfinite(c)) {
        throw ParseError("term " + format_exponents(e) + ": coefficient is not finite");
      }
      if (!p.terms_.emplace(e, c).second) {
        throw ParseError("term " + format_exponents(e) + ": duplicate monomial");
      }
    }
    return p;
  }

  /// Inverse of coefficients(): dense vector in grlex order, zeros dropped.
  static HomogeneousPolynomial from_coefficients(int n, int d, const Vector& coefs) {
    auto mons = monomials(n, d);
    if (static_cast<std::size_t>(coefs.size()) != mons.size()) {
      throw InputError("coefficient vector has length " + std::to_string(coefs.size()) +
                       ", expected " + std::to_string(mons.size()));
    }
    HomogeneousPolynomial p(n, d);
    for (std::size_t k = 0; k < mons.size(); ++k) {
      if (coefs[static_cast<Eigen::Index>(k)] != 0.0) p.terms_.emplace(mons[k], coefs[static_cast<Eigen::Index>(k)]);
    }
    return p;
  }

  int num_vars() const { return n_; }
  int degree() const { return d_; }
  const TermMap& terms() const { return terms_; }

  double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  Vector coefficients() const {
    auto mons = monomials(n_, d_);
    Vector v(static_cast<Eigen::Index>(mons.size()));
    for (std::size_t k = 0; k < mons.size(); ++k) v[static_cast<Eigen::Index>(k)] = coefficient(mons[k]);
    return v;
  }

  /// Euclidean norm of the coefficient vector.
  double coefficient_norm() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += c * c;
    return std::sqrt(s);
  }

  bool is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second == 0.0; });
  }

  friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.terms_ == b.terms_;
  }

 private:
  static void check_shape(int n, int d) {
    if (n < 1) throw InputError("variable count must be >= 1, got " + std::to_string(n));
    if (d < 1) throw InputError("degree must be >= 1, got " + std::to_string(d));
  }

  void validate_term(const Exponents& e) const {
    if (static_cast<int>(e.size()) != n_) {
      throw ParseError("term " + format_exponents(e) + ": expected " + std::to_string(n_) + " exponents");
    }
    int sum = 0;
    for (int k : e) {
      if (k < 0) throw ParseError("term " + format_exponents(e) + ": negative exponent");
      sum += k;
    }
    if (sum != d_) {
      throw ParseError("term " + format_exponents(e) + ": exponent sum " + std::to_string(sum) +
                       " ≠ degree " + std::to_string(d_));
    }
  }

  int n_;
  int d_;
  TermMap terms_;
};

/// Analysis entry points call this; every point is degenerate for f = 0.
inline void require_nonzero(const HomogeneousPolynomial& f) {
  if (f.is_zero()) throw ZeroPolynomialError("the zero polynomial has no isolated critical structure");
}

// ---------------------------------------------------------------------------
// Calculus

namespace detail {

/// powers(i, k) = x_i^k for k = 0..d.
inline Matrix power_table(std::span<const double> x, int d) {
  Matrix pw(static_cast<Eigen::Index>(x.size()), d + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    pw(r, 0) = 1.0;
    for (int k = 1; k <= d; ++k) pw(r, k) = pw(r, k - 1) * x[i];
  }
  return pw;
}

inline double monomial_value(const Matrix& pw, const Exponents& e) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) v *= pw(static_cast<Eigen::Index>(i), e[i]);
  return v;
}

inline void check_dim(const HomogeneousPolynomial& f, std::size_t n) {
  if (static_cast<int>(n) != f.num_vars()) {
    throw InputError("point has dimension " + std::to_string(n) + ", polynomial has " +
                     std::to_string(f.num_vars()) + " variables");
  }
}

inline std::span<const double> as_span(const Vector& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace detail

inline double evaluate(const HomogeneousPolynomial& f, const Vector& x) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  const Matrix pw = detail::power_table(detail::as_span(x), f.degree());
  double s = 0.0;
  for (const auto& [e, c] : f.terms()) s += c * detail::monomial_value(pw, e);
  return s;
}

inline Vector gradient(const HomogeneousPolynomial& f, const Vector& x) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  const int n = f.num_vars();
  const Matrix pw = detail::power_table(detail::as_span(x), f.degree());
  Vector g = Vector::Zero(n);
  Exponents de;
  for (const auto& [e, c] : f.terms()) {
    for (int i = 0; i < n; ++i) {
      const int ei = e[static_cast<std::size_t>(i)];
      if (ei == 0) continue;
      de = e;
      de[static_cast<std::size_t>(i)] -= 1;
      g[i] += c * ei * detail::monomial_value(pw, de);
    }
  }
  return g;
}

inline Matrix hessian(const HomogeneousPolynomial& f, const Vector& x) {
  detail::check_dim(f, static_cast<std::size_t>(x.size()));
  const int n = f.num_vars();
  const Matrix pw = detail::power_table(detail::as_span(x), f.degree());
  Matrix h = Matrix::Zero(n, n);
  Exponents de;
  for (const auto& [e, c] : f.terms()) {
    for (int i = 0; i < n; ++i) {
      const int ei = e[static_cast<std::size_t>(i)];
      if (ei == 0) continue;
      for (int j = i; j < n; ++j) {
        const int ej = e[static_cast<std::size_t>(j)];
        double factor = 0.0;
        de = e;
        if (i == j) {
          if (ei < 2) continue;
          factor = static_cast<double>(ei) * (ei - 1);
          de[static_cast<std::size_t>(i)] -= 2;
        } else {
          if (ej == 0) continue;
          factor = static_cast<double>(ei) * ej;
          de[static_cast<std::size_t>(i)] -= 1;
          de[static_cast<std::size_t>(j)] -= 1;
        }
        h(i, j) += c * factor * detail::monomial_value(pw, de);
      }
    }
  }
  h.triangularView<Eigen::StrictlyLower>() = h.transpose().triangularView<Eigen::StrictlyLower>();
  return h;
}

// ---------------------------------------------------------------------------
// Construction helpers

/// Every coefficient iid standard normal; deterministic in seed.
inline HomogeneousPolynomial random_polynomial(int n, int d, std::uint64_t seed) {
  HomogeneousPolynomial probe(n, d);  // validates shape
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector c(static_cast<Eigen::Index>(monomial_count(n, d)));
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = normal(rng);
  return HomogeneousPolynomial::from_coefficients(n, d, c);
}

/// f(x) = 1/2 x^T A x for symmetric A.
inline HomogeneousPolynomial quadratic_form(const Matrix& a) {
  const auto n = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw InputError("quadratic form needs a square matrix");
  std::vector<std::pair<Exponents, double>> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Exponents e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] += 1;
      e[static_cast<std::size_t>(j)] += 1;
      const double c = (i == j) ? 0.5 * a(i, i) : 0.5 * (a(i, j) + a(j, i));
      if (c != 0.0) terms.emplace_back(std::move(e), c);
    }
  }
  return HomogeneousPolynomial::from_terms(n, 2, terms);
}

/// f(x) = sum_k c_k x_k^d.
inline HomogeneousPolynomial power_sum(const Vector& c, int d) {
  const auto n = static_cast<int>(c.size());
  std::vector<std::pair<Exponents, double>> terms;
  for (int k = 0; k < n; ++k) {
    if (c[k] == 0.0) continue;
    Exponents e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(k)] = d;
    terms.emplace_back(std::move(e), c[k]);
  }
  return HomogeneousPolynomial::from_terms(n, d, terms);
}

/// coef * x_var^d in n variables.
inline HomogeneousPolynomial single_monomial(int n, int d, int var, double coef = 1.0) {
  if (var < 0 || var >= n) throw InputError("variable index out of range");
  Exponents e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(var)] = d;
  return HomogeneousPolynomial::from_terms(n, d, {{e, coef}});
}

}  // namespace sphopt
