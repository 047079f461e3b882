#pragma once

// Binary forms (homogeneous polynomials in x1, x2) over an arbitrary field
// type, with the univariate GCD needed to test for a common projective root.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sphopt {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double. Every such double is m * 2^e.
inline Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("exact_rational: value is not finite");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  boost::multiprecision::cpp_int num(m);
  boost::multiprecision::cpp_int den(1);
  exp -= 53;
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  return Rational(num, den);
}

/// c[k] is the coefficient of x1^k x2^(degree-k). The zero form carries a
/// degree too so that sums and products stay homogeneous.
template <class Scalar>
class BinaryForm {
 public:
  BinaryForm() = default;
  explicit BinaryForm(int degree) : c_(static_cast<std::size_t>(degree + 1), Scalar(0)) {
    if (degree < 0) throw std::invalid_argument("binary form degree must be >= 0");
  }
  explicit BinaryForm(std::vector<Scalar> coefs) : c_(std::move(coefs)) {
    if (c_.empty()) throw std::invalid_argument("binary form needs at least one coefficient");
  }

  static BinaryForm x1() { return BinaryForm(std::vector<Scalar>{Scalar(0), Scalar(1)}); }
  static BinaryForm x2() { return BinaryForm(std::vector<Scalar>{Scalar(1), Scalar(0)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coefficients() const { return c_; }
  Scalar& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const Scalar& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

  bool is_zero() const {
    for (const auto& v : c_) {
      if (v != Scalar(0)) return false;
    }
    return true;
  }

  /// Value at the projective point (1, 0).
  const Scalar& at_infinity() const { return c_.back(); }

  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
    check_same_degree(a, b);
    BinaryForm r = a;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += b.c_[k];
    return r;
  }
  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
    check_same_degree(a, b);
    BinaryForm r = a;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] -= b.c_[k];
    return r;
  }
  friend BinaryForm operator-(const BinaryForm& a) {
    BinaryForm r = a;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm r(a.degree() + b.degree());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == Scalar(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend BinaryForm operator*(const Scalar& s, const BinaryForm& a) {
    BinaryForm r = a;
    for (auto& v : r.c_) v *= s;
    return r;
  }

 private:
  static void check_same_degree(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("binary forms of different degree");
  }

  std::vector<Scalar> c_;
};

/// Univariate polynomial p(t), p[k] the coefficient of t^k, without leading
/// zeros; the zero polynomial is empty.
template <class Scalar>
using Univariate = std::vector<Scalar>;

template <class Scalar>
void trim(Univariate<Scalar>& p) {
  while (!p.empty() && p.back() == Scalar(0)) p.pop_back();
}

/// Restriction to x2 = 1, i.e. t = x1.
template <class Scalar>
Univariate<Scalar> dehomogenize(const BinaryForm<Scalar>& f) {
  Univariate<Scalar> p = f.coefficients();
  trim(p);
  return p;
}

template <class Scalar>
void make_monic(Univariate<Scalar>& p) {
  if (p.empty()) return;
  const Scalar lead = p.back();
  for (auto& v : p) v /= lead;
}

template <class Scalar>
Univariate<Scalar> poly_mod(Univariate<Scalar> a, const Univariate<Scalar>& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  while (a.size() >= b.size()) {
    const Scalar q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= q * b[k];
    a.pop_back();  // leading term cancels exactly in a field
    trim(a);
  }
  return a;
}

/// Monic GCD by the Euclidean algorithm; gcd(0, 0) is the zero polynomial.
template <class Scalar>
Univariate<Scalar> poly_gcd(Univariate<Scalar> a, Univariate<Scalar> b) {
  trim(a);
  trim(b);
  make_monic(a);
  make_monic(b);
  while (!b.empty()) {
    Univariate<Scalar> r = poly_mod(a, b);
    make_monic(r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Human-readable polynomial in t with coefficients as doubles.
template <class Scalar>
std::string describe_univariate(const Univariate<Scalar>& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t k = p.size(); k-- > 0;) {
    const double v = static_cast<double>(p[k]);
    if (v == 0.0) continue;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    first = false;
    os << std::abs(v);
    if (k > 0) os << "*t";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

}  // namespace sphopt
