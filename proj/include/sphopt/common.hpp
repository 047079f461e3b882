#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sphopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad dimensions, non-unit points and other caller mistakes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed polynomial file or term.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The zero polynomial was handed to an analysis entry point.
class ZeroPolynomialError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point failed the first-order condition where one was required.
class NotCriticalError : public std::runtime_error {
 public:
  NotCriticalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Relative tolerances; each is scaled where it is used.
struct Tolerances {
  double tol_crit = 1e-9;   ///< FONC residual, times max(1, |f|)
  double tol_class = 1e-7;  ///< SOSC margin band, times max(1, |f|)
  double tol_rank = 1e-6;   ///< third singular value, times the largest one
  double tol_det = 1e-8;    ///< bordered determinant, times BorderedMatrix::scale
  double tol_eig = 1e-8;    ///< eigenvalue coincidence, times |A|_F
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Seed for the index-th independent stream under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return detail::splitmix64(detail::splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

}  // namespace sphopt
