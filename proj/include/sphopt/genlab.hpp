#pragma once

// Experiment harness: deterministic witness suites built from explicit
// polynomials, degenerate constructions that must be flagged, and seeded
// random sweeps checking that generic inputs have no degenerate SONC points.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "sphopt/report.hpp"

namespace sphopt {

enum class ExperimentMode { Random, WitnessD2, WitnessGeneral, DegenerateFamily, QuadraticSweep };

inline const char* to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Random: return "random";
    case ExperimentMode::WitnessD2: return "witness_d2";
    case ExperimentMode::WitnessGeneral: return "witness_general";
    case ExperimentMode::DegenerateFamily: return "degenerate_family";
    case ExperimentMode::QuadraticSweep: return "quadratic_sweep";
  }
  return "?";
}

struct ExperimentConfig {
  int n = 2;
  int d = 3;
  int trials = 1;
  std::uint64_t seed = 0;
  ExperimentMode mode = ExperimentMode::Random;
  AnalysisConfig analysis;
  /// When set, every polynomial with a degenerate hit is written here.
  std::string dump_dir;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InputError("trials must be >= 1");
  if (cfg.n < 1) throw InputError("n must be >= 1");
  if (cfg.d < 1) throw InputError("d must be >= 1");
}

using VerdictHistogram = std::array<std::size_t, 4>;  // indexed by Verdict

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t critical_count = 0;
  VerdictHistogram histogram{};
  std::optional<double> min_sosc_margin;
  std::size_t degenerate_hits = 0;  ///< SONC_DEGENERATE verdicts
  std::size_t rank_witnesses = 0;   ///< SONC points with a rank-deficient tangent witness
  std::optional<OracleResult> oracle;         ///< n = 2
  std::optional<bool> quadratic_degenerate;   ///< d = 2
  std::optional<bool> pipeline_agrees;        ///< quadratic sweep
  std::string dumped_to;
};

struct MarginQuantiles {
  double min = 0.0, q05 = 0.0, median = 0.0, q95 = 0.0, max = 0.0;
};

struct ExperimentReport {
  ExperimentMode mode = ExperimentMode::Random;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> trials;
  std::size_t total_degenerate = 0;
  std::size_t total_rank_witnesses = 0;
  std::size_t disagreements = 0;  ///< quadratic sweep only
  std::optional<MarginQuantiles> margins;
  double runtime_seconds = 0.0;
};

namespace detail {

inline double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, idx == 0 ? 0 : idx - 1)];
}

inline void finalize(ExperimentReport& rep) {
  std::vector<double> mins;
  rep.total_degenerate = 0;
  rep.total_rank_witnesses = 0;
  for (const auto& t : rep.trials) {
    rep.total_degenerate += t.degenerate_hits;
    rep.total_rank_witnesses += t.rank_witnesses;
    if (t.min_sosc_margin) mins.push_back(*t.min_sosc_margin);
  }
  if (!mins.empty()) {
    std::sort(mins.begin(), mins.end());
    rep.margins = MarginQuantiles{mins.front(), nearest_rank(mins, 0.05), nearest_rank(mins, 0.5),
                                  nearest_rank(mins, 0.95), mins.back()};
  }
}

/// Classifies every critical point of f and fills the per-trial counters.
inline TrialRecord analyse_trial(const HomogeneousPolynomial& f, std::uint64_t seed, const AnalysisConfig& base) {
  AnalysisConfig cfg = base;
  cfg.search.seed = derive_seed(seed, 1);
  TrialRecord rec;
  rec.seed = seed;
  const auto pts = classify_all(f, cfg);
  rec.critical_count = pts.size();
  for (const auto& cp : pts) {
    rec.histogram[static_cast<std::size_t>(cp.verdict)] += 1;
    if (cp.verdict == Verdict::Sosc && std::isfinite(cp.sosc_margin)) {
      rec.min_sosc_margin = rec.min_sosc_margin ? std::min(*rec.min_sosc_margin, cp.sosc_margin) : cp.sosc_margin;
    }
    if (cp.verdict == Verdict::SoncDegenerate) ++rec.degenerate_hits;
    if (cp.verdict == Verdict::Sosc || cp.verdict == Verdict::SoncDegenerate) {
      const bool witnessed = detect_sosc_failure(f, cp.pair.x, cfg.tol).has_value() ||
                             scan_tangent_witnesses(f, cp.pair.x, cfg.tol).any_rank_deficient;
      if (witnessed) ++rec.rank_witnesses;
    }
  }
  if (f.num_vars() == 2) rec.oracle = exact_oracle_n2(f);
  return rec;
}

inline std::string dump_polynomial(const ExperimentConfig& cfg, const HomogeneousPolynomial& f, std::uint64_t seed) {
  if (cfg.dump_dir.empty()) return {};
  std::filesystem::create_directories(cfg.dump_dir);
  const std::string path = cfg.dump_dir + "/degenerate_n" + std::to_string(f.num_vars()) + "_d" +
                           std::to_string(f.degree()) + "_seed" + std::to_string(seed) + ".json";
  write_text_file(path, serialize_polynomial(f));
  return path;
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace detail

/// The symmetric matrix A of a quadratic form f = 1/2 x^T A x.
inline Matrix quadratic_matrix(const HomogeneousPolynomial& f) {
  if (f.degree() != 2) throw InputError("quadratic_matrix needs d = 2");
  return hessian(f, Vector::Zero(f.num_vars()));
}

// ---------------------------------------------------------------------------
// Random genericity

inline ExperimentReport run_random_genericity(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = detail::Clock::now();
  ExperimentReport rep;
  rep.mode = ExperimentMode::Random;
  rep.n = cfg.n;
  rep.d = cfg.d;
  rep.seed = cfg.seed;
  rep.trials.reserve(static_cast<std::size_t>(cfg.trials));
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    const HomogeneousPolynomial f = random_polynomial(cfg.n, cfg.d, seed);
    TrialRecord rec = detail::analyse_trial(f, seed, cfg.analysis);
    if (cfg.d == 2) rec.quadratic_degenerate = quadratic_degeneracy(quadratic_matrix(f), cfg.analysis.tol.tol_eig).degenerate;
    if (rec.degenerate_hits > 0 || rec.rank_witnesses > 0) rec.dumped_to = detail::dump_polynomial(cfg, f, seed);
    rep.trials.push_back(std::move(rec));
  }
  detail::finalize(rep);
  rep.runtime_seconds = detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Witness suites

struct SuiteCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PointRecord {
  ClassifiedPoint point;
  double bordered_det = 0.0;
  double det_scale = 0.0;  ///< BorderedMatrix::scale
  std::optional<DegeneracyWitness> witness;
  std::optional<WitnessReconstruction> reconstruction;
};

struct SuiteReport {
  std::string suite;
  int n = 0;
  int d = 0;
  HomogeneousPolynomial polynomial{1, 1};
  std::vector<PointRecord> points;
  std::vector<SuiteCheck> checks;
  std::optional<OracleResult> oracle;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
  }
  void check(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

namespace detail {

inline PointRecord record_point(const HomogeneousPolynomial& f, const Vector& x, const Tolerances& tol) {
  PointRecord r;
  r.point = classify_point(f, x, tol);
  const BorderedMatrix b = bordered_matrix(f, x, r.point.pair.lambda);
  r.bordered_det = b.det;
  r.det_scale = b.scale;
  if (r.point.verdict != Verdict::NotCritical) r.witness = detect_sosc_failure(f, x, tol);
  if (r.witness) r.reconstruction = reconstruct_from_witness(f, r.witness->x, r.witness->y);
  return r;
}

inline std::string fmt(double v) { return format_double(v); }

}  // namespace detail

/// Diagonal quadratic p = 1/2 (x1^2 + 2 x2^2 + ... + n xn^2). Its critical
/// pairs are (+-e_k, k); only +-e1 are SOSC and no point is degenerate.
inline HomogeneousPolynomial witness_quadratic(int n) {
  Vector diag(n);
  for (int k = 0; k < n; ++k) diag[k] = k + 1;
  return quadratic_form(diag.asDiagonal().toDenseMatrix());
}

/// p = a x1^d + a^2 x2^d + ... + a^n xn^d with a = 2^(d-2).
inline HomogeneousPolynomial witness_power_sum(int n, int d) {
  const double alpha = std::ldexp(1.0, d - 2);
  Vector c(n);
  double a = 1.0;
  for (int k = 0; k < n; ++k) c[k] = (a *= alpha);
  return power_sum(c, d);
}

inline SuiteReport run_witness_d2(int n, const AnalysisConfig& cfg = {}) {
  if (n < 2) throw InputError("witness_d2 needs n >= 2");
  SuiteReport rep;
  rep.suite = "witness_d2";
  rep.n = n;
  rep.d = 2;
  rep.polynomial = witness_quadratic(n);
  const auto& p = rep.polynomial;
  constexpr double kTol = 1e-8;

  const auto found = classify_all(p, cfg);
  rep.check("critical count is 2n", found.size() == static_cast<std::size_t>(2 * n),
            "found " + std::to_string(found.size()));

  // Every found point must be some +-e_k with lambda = k and margin 1 - k
  // (k > 1) or 1 (k = 1).
  std::vector<int> hits(static_cast<std::size_t>(2 * n), 0);
  bool all_axes = true;
  double worst_margin_err = 0.0;
  for (const auto& cp : found) {
    Eigen::Index k = 0;
    cp.pair.x.cwiseAbs().maxCoeff(&k);
    Vector e = Vector::Zero(n);
    e[k] = cp.pair.x[k] > 0 ? 1.0 : -1.0;
    const double lam = static_cast<double>(k + 1);
    const double expected_margin = (k == 0) ? 1.0 : 1.0 - lam;
    if ((cp.pair.x - e).norm() > kTol || std::abs(cp.pair.lambda - lam) > kTol) all_axes = false;
    worst_margin_err = std::max(worst_margin_err, std::abs(cp.sosc_margin - expected_margin));
    hits[static_cast<std::size_t>(2 * k + (e[k] > 0 ? 0 : 1))] += 1;
  }
  const bool each_once = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  rep.check("critical pairs are exactly (+-e_k, k)", all_axes && each_once);
  rep.check("margins match 1 at e1 and 1-k at e_k", worst_margin_err <= kTol, "max error " + detail::fmt(worst_margin_err));

  std::size_t sosc = 0;
  bool sosc_only_e1 = true;
  for (const auto& cp : found) {
    if (cp.verdict != Verdict::Sosc) continue;
    ++sosc;
    if (std::abs(std::abs(cp.pair.x[0]) - 1.0) > kTol) sosc_only_e1 = false;
  }
  rep.check("only +-e1 are SOSC", sosc == 2 && sosc_only_e1, std::to_string(sosc) + " SOSC points");

  // Closed-form points, independent of the solver.
  bool det_nonzero = true;
  bool no_witness = true;
  bool no_rank_deficiency = true;
  for (int l = 0; l < n; ++l) {
    for (double s : {1.0, -1.0}) {
      Vector x = Vector::Zero(n);
      x[l] = s;
      PointRecord r = detail::record_point(p, x, cfg.tol);
      if (bordered_singular(bordered_matrix(p, x, r.point.pair.lambda), cfg.tol.tol_det)) det_nonzero = false;
      if (r.witness) no_witness = false;
      if (r.point.verdict == Verdict::Sosc && scan_tangent_witnesses(p, x, cfg.tol).any_rank_deficient) {
        no_rank_deficiency = false;
      }
      rep.points.push_back(std::move(r));
    }
  }
  rep.check("det H(e_l, l) != 0 for every l", det_nonzero);
  rep.check("no degeneracy witness", no_witness);
  rep.check("no rank-deficient tangent witness at SOSC points", no_rank_deficiency);
  return rep;
}

/// Real critical points of sum_k c_k x_k^d (all c_k > 0) in closed form:
/// on a support S, x_k^(d-2) = lambda / (d c_k). Feasible for small n.
inline std::vector<Vector> power_sum_critical_points(const Vector& c, int d) {
  const auto n = static_cast<int>(c.size());
  if (d == 2) throw InputError("closed form excludes d = 2");
  if (n > 4) throw InputError("closed-form enumeration is limited to n <= 4");
  std::vector<Vector> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> support;
    for (int k = 0; k < n; ++k) {
      if (mask & (1u << k)) support.push_back(k);
    }
    // A linear form has no zero gradient component, so only full support.
    if (d == 1 && static_cast<int>(support.size()) != n) continue;
    Vector r = Vector::Zero(n);
    for (int k : support) r[k] = std::pow(1.0 / (d * c[k]), 1.0 / (d - 2));
    r /= r.norm();
    if (d % 2 != 0) {
      // x_k carries the sign of lambda; both branches.
      out.push_back(r);
      out.push_back(-r);
    } else {
      // lambda > 0, each nonzero coordinate takes either sign.
      const auto m = support.size();
      for (unsigned signs = 0; signs < (1u << m); ++signs) {
        Vector x = r;
        for (std::size_t i = 0; i < m; ++i) {
          if (signs & (1u << i)) x[support[i]] = -x[support[i]];
        }
        out.push_back(x);
      }
    }
  }
  return out;
}

/// det_margin: required |det H| / BorderedMatrix::scale at every critical point.
inline SuiteReport run_witness_general(int n, int d, const AnalysisConfig& cfg = {}, double det_margin = 1e-6) {
  if (d == 2) throw InputError("witness_general excludes d = 2; use witness_d2");
  if (d < 1 || n < 2) throw InputError("witness_general needs d >= 1 and n >= 2");
  SuiteReport rep;
  rep.suite = "witness_general";
  rep.n = n;
  rep.d = d;
  rep.polynomial = witness_power_sum(n, d);
  const auto& p = rep.polynomial;
  const double crit_tol = crit_tolerance(p, cfg.tol.tol_crit);

  std::vector<Vector> xs;
  if (n <= 4) {
    const double alpha = std::ldexp(1.0, d - 2);
    Vector c(n);
    double a = 1.0;
    for (int k = 0; k < n; ++k) c[k] = (a *= alpha);
    xs = power_sum_critical_points(c, d);
  } else {
    CritConfig search = cfg.search;
    search.tol_crit = cfg.tol.tol_crit;
    for (const auto& pr : find_critical_pairs(p, search).pairs) xs.push_back(pr.x);
  }

  bool all_critical = true;
  bool det_ok = true;
  double worst_ratio = std::numeric_limits<double>::infinity();
  bool no_degenerate = true;
  bool no_rank_deficiency = true;
  for (const Vector& x : xs) {
    PointRecord r = detail::record_point(p, x, cfg.tol);
    if (r.point.pair.residual > crit_tol) all_critical = false;
    const double ratio = r.det_scale > 0 ? std::abs(r.bordered_det) / r.det_scale : 0.0;
    worst_ratio = std::min(worst_ratio, ratio);
    if (!(std::abs(r.bordered_det) > det_margin * r.det_scale)) det_ok = false;
    if (r.point.verdict == Verdict::SoncDegenerate || r.witness) no_degenerate = false;
    if (r.point.verdict == Verdict::Sosc && scan_tangent_witnesses(p, x, cfg.tol).any_rank_deficient) {
      no_rank_deficiency = false;
    }
    rep.points.push_back(std::move(r));
  }
  rep.check("closed-form points satisfy the FONC", all_critical, std::to_string(xs.size()) + " points");
  rep.check("|det H| > " + detail::fmt(det_margin) + " * scale at every critical point", det_ok,
            "min |det H|/scale = " + detail::fmt(worst_ratio));
  rep.check("no SONC point is degenerate", no_degenerate);
  rep.check("no rank-deficient tangent witness at SOSC points", no_rank_deficiency);

  if (n <= 4) {
    // The solver must not find anything outside the closed-form set.
    CritConfig search = cfg.search;
    search.tol_crit = cfg.tol.tol_crit;
    const auto found = find_critical_pairs(p, search);
    std::size_t stray = 0;
    for (const auto& pr : found.pairs) {
      const bool known = std::any_of(xs.begin(), xs.end(), [&](const Vector& x) { return (x - pr.x).norm() <= 1e-6; });
      if (!known) ++stray;
    }
    rep.check("multistart finds no point outside the closed-form set", stray == 0,
              std::to_string(found.pairs.size()) + " found, " + std::to_string(stray) + " unexplained");
  }
  if (n == 2) {
    rep.oracle = exact_oracle_n2(p);
    rep.check("exact n=2 oracle: not on the locus", !rep.oracle->on_locus, rep.oracle->certificate);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Degenerate constructions

enum class DegenerateKind { RepeatedLambda1, SingleMonomial };

inline const char* to_string(DegenerateKind k) {
  return k == DegenerateKind::RepeatedLambda1 ? "repeated_lambda1" : "single_monomial";
}

/// diag(1, 1, 2, ..., n-1): least eigenvalue repeated.
inline Matrix repeated_lambda1_matrix(int n) {
  Vector diag(n);
  for (int k = 0; k < n; ++k) diag[k] = std::max(1, k);
  return diag.asDiagonal().toDenseMatrix();
}

/// Unit points with x1 = 0: +-e2 for n = 2, otherwise evenly spread on
/// great circles of {x1 = 0} through e2 and each later axis.
inline std::vector<Vector> points_on_x1_zero(int n, int per_circle = 12) {
  std::vector<Vector> out;
  if (n == 2) {
    for (double s : {1.0, -1.0}) {
      Vector x = Vector::Zero(2);
      x[1] = s;
      out.push_back(x);
    }
    return out;
  }
  const double pi = std::acos(-1.0);
  for (int j = 2; j < n; ++j) {
    for (int k = 0; k < per_circle; ++k) {
      const double t = 2.0 * pi * (k + 0.5) / per_circle;
      Vector x = Vector::Zero(n);
      x[1] = std::cos(t);
      x[j] = std::sin(t);
      out.push_back(x);
    }
  }
  return out;
}

inline SuiteReport run_degenerate_family(DegenerateKind kind, int n, int d, const AnalysisConfig& cfg = {}) {
  if (n < 2) throw InputError("degenerate families need n >= 2");
  if (kind == DegenerateKind::RepeatedLambda1 && d != 2) throw InputError("repeated_lambda1 requires d = 2");
  if (kind == DegenerateKind::SingleMonomial && d < 3) throw InputError("single_monomial requires d >= 3");
  SuiteReport rep;
  rep.suite = std::string("degenerate_family:") + to_string(kind);
  rep.n = n;
  rep.d = d;
  rep.polynomial = kind == DegenerateKind::RepeatedLambda1 ? quadratic_form(repeated_lambda1_matrix(n))
                                                            : single_monomial(n, d, 0);
  const auto& f = rep.polynomial;

  const auto found = classify_all(f, cfg);
  const std::size_t degenerate = count_verdict(found, Verdict::SoncDegenerate);
  rep.check("pipeline reports SONC_DEGENERATE points", degenerate > 0,
            std::to_string(degenerate) + " of " + std::to_string(found.size()));

  std::vector<Vector> probes;
  for (const auto& cp : found) {
    if (cp.verdict == Verdict::SoncDegenerate) probes.push_back(cp.pair.x);
  }
  if (kind == DegenerateKind::SingleMonomial) {
    bool on_plane = true;
    for (const auto& x : probes) on_plane = on_plane && std::abs(x[0]) <= 1e-4;
    rep.check("degenerate points lie on {x1 = 0}", on_plane);
    for (auto& x : points_on_x1_zero(n)) probes.push_back(std::move(x));
  } else {
    const QuadraticDegeneracy q = quadratic_degeneracy(repeated_lambda1_matrix(n), cfg.tol.tol_eig);
    rep.check("least eigenvalue is repeated", q.degenerate,
              "multiplicity " + std::to_string(q.lambda1_multiplicity));
  }

  bool all_flagged = true;
  bool rank_ok = true;
  bool det_ok = true;
  bool converse_ok = true;
  double worst_sigma3 = 0.0;
  const double crit_tol = crit_tolerance(f, cfg.tol.tol_crit);
  const double class_tol = class_tolerance(f, cfg.tol.tol_class);
  for (const auto& x : probes) {
    PointRecord r = detail::record_point(f, x, cfg.tol);
    if (r.point.verdict != Verdict::SoncDegenerate || !r.witness) {
      all_flagged = false;
    } else {
      worst_sigma3 = std::max(worst_sigma3, r.witness->rank_defect_measure);
      if (!r.witness->rank_verified) rank_ok = false;
      if (std::abs(r.witness->bordered_det) > cfg.tol.tol_det * r.witness->det_scale) det_ok = false;
      if (r.reconstruction->fonc_residual > crit_tol || r.reconstruction->sosc_margin > class_tol) converse_ok = false;
    }
    rep.points.push_back(std::move(r));
  }
  rep.check("every probed degenerate point yields a witness", all_flagged,
            std::to_string(probes.size()) + " points");
  rep.check("witness matrix rank <= 2", rank_ok, "max third singular value " + detail::fmt(worst_sigma3));
  rep.check("bordered determinant vanishes", det_ok);
  rep.check("witness alone implies FONC and SOSC failure", converse_ok);

  if (n == 2) {
    rep.oracle = exact_oracle_n2(f);
    rep.check("exact n=2 oracle: on the locus", rep.oracle->on_locus, rep.oracle->certificate);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quadratic sweep

/// Gaussian symmetric matrix (G + G^T) / 2.
inline Matrix random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  return 0.5 * (g + g.transpose());
}

/// Q diag(l1 (k times), l1 + 1, l1 + 2, ...) Q^T with Haar-ish random Q.
inline Matrix planted_symmetric(int n, int multiplicity, std::uint64_t seed) {
  if (multiplicity < 1 || multiplicity > n) throw InputError("multiplicity must be in [1, n]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector diag(n);
  const double l1 = normal(rng);
  for (int k = 0; k < n; ++k) diag[k] = l1 + std::max(0, k - multiplicity + 1);
  const Matrix a = q * diag.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

struct QuadraticCheck {
  QuadraticDegeneracy eig;
  bool pipeline_degenerate = false;  ///< classify_all found a SONC_DEGENERATE point
  bool witness_at_minimizer = false; ///< detect_sosc_failure at the lambda1 eigenvector
  bool agree() const { return eig.degenerate == pipeline_degenerate && eig.degenerate == witness_at_minimizer; }
};

inline QuadraticCheck check_quadratic(const Matrix& a, const AnalysisConfig& cfg = {}) {
  QuadraticCheck qc;
  qc.eig = quadratic_degeneracy(a, cfg.tol.tol_eig);
  const HomogeneousPolynomial f = quadratic_form(a);
  qc.pipeline_degenerate = count_verdict(classify_all(f, cfg), Verdict::SoncDegenerate) > 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  const Vector v = es.eigenvectors().col(0).normalized();
  qc.witness_at_minimizer = detect_sosc_failure(f, v, cfg.tol).has_value();
  return qc;
}

inline ExperimentReport run_quadratic_sweep(int n, int trials, std::uint64_t seed, const AnalysisConfig& cfg = {}) {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (n < 1) throw InputError("n must be >= 1");
  const auto t0 = detail::Clock::now();
  ExperimentReport rep;
  rep.mode = ExperimentMode::QuadraticSweep;
  rep.n = n;
  rep.d = 2;
  rep.seed = seed;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
    const Matrix a = random_symmetric(n, s);
    const HomogeneousPolynomial f = quadratic_form(a);
    TrialRecord rec = detail::analyse_trial(f, s, cfg);
    const QuadraticCheck qc = check_quadratic(a, [&] {
      AnalysisConfig c = cfg;
      c.search.seed = derive_seed(s, 1);
      return c;
    }());
    rec.quadratic_degenerate = qc.eig.degenerate;
    rec.pipeline_agrees = qc.agree();
    if (!qc.agree()) ++rep.disagreements;
    rep.trials.push_back(std::move(rec));
  }
  detail::finalize(rep);
  rep.runtime_seconds = detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(const TrialRecord& t) {
  json j = {{"seed", t.seed},
            {"critical_count", t.critical_count},
            {"verdict_histogram",
             {{"NOT_CRITICAL", t.histogram[0]},
              {"FONC_ONLY", t.histogram[1]},
              {"SONC_DEGENERATE", t.histogram[2]},
              {"SOSC", t.histogram[3]}}},
            {"min_sosc_margin", t.min_sosc_margin ? json(*t.min_sosc_margin) : json(nullptr)},
            {"degenerate_hits", t.degenerate_hits},
            {"rank_witnesses", t.rank_witnesses}};
  if (t.oracle) j["oracle_result"] = to_json(*t.oracle);
  if (t.quadratic_degenerate) j["quadratic_degenerate"] = *t.quadratic_degenerate;
  if (t.pipeline_agrees) j["pipeline_agrees"] = *t.pipeline_agrees;
  if (!t.dumped_to.empty()) j["dumped_to"] = t.dumped_to;
  return j;
}

inline json to_json(const ExperimentReport& r, bool include_runtime = false) {
  json trials = json::array();
  for (const auto& t : r.trials) trials.push_back(to_json(t));
  json agg = {{"trials", r.trials.size()},
              {"total_degenerate", r.total_degenerate},
              {"total_rank_witnesses", r.total_rank_witnesses}};
  if (r.mode == ExperimentMode::QuadraticSweep) agg["disagreements"] = r.disagreements;
  if (r.margins) {
    agg["margin_quantiles"] = {{"min", r.margins->min},
                               {"q05", r.margins->q05},
                               {"median", r.margins->median},
                               {"q95", r.margins->q95},
                               {"max", r.margins->max}};
  } else {
    agg["margin_quantiles"] = nullptr;
  }
  if (include_runtime) agg["runtime_seconds"] = r.runtime_seconds;
  return {{"mode", to_string(r.mode)}, {"n", r.n}, {"d", r.d}, {"seed", r.seed}, {"aggregate", agg}, {"trials", trials}};
}

/// Inverse of to_json(ExperimentReport) for the fields that define a run.
inline ExperimentReport experiment_report_from_json(const json& j) {
  ExperimentReport r;
  const std::string mode = j.at("mode").get<std::string>();
  for (auto m : {ExperimentMode::Random, ExperimentMode::WitnessD2, ExperimentMode::WitnessGeneral,
                 ExperimentMode::DegenerateFamily, ExperimentMode::QuadraticSweep}) {
    if (mode == to_string(m)) r.mode = m;
  }
  r.n = j.at("n").get<int>();
  r.d = j.at("d").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("trials")) {
    TrialRecord rec;
    rec.seed = t.at("seed").get<std::uint64_t>();
    rec.critical_count = t.at("critical_count").get<std::size_t>();
    const auto& h = t.at("verdict_histogram");
    rec.histogram = {h.at("NOT_CRITICAL").get<std::size_t>(), h.at("FONC_ONLY").get<std::size_t>(),
                     h.at("SONC_DEGENERATE").get<std::size_t>(), h.at("SOSC").get<std::size_t>()};
    if (!t.at("min_sosc_margin").is_null()) rec.min_sosc_margin = t.at("min_sosc_margin").get<double>();
    rec.degenerate_hits = t.at("degenerate_hits").get<std::size_t>();
    rec.rank_witnesses = t.at("rank_witnesses").get<std::size_t>();
    if (t.contains("oracle_result")) {
      OracleResult o;
      const auto& oj = t.at("oracle_result");
      o.on_locus = oj.at("on_locus").get<bool>();
      o.minors_identically_zero = oj.at("minors_identically_zero").get<bool>();
      o.root_at_infinity = oj.at("root_at_infinity").get<bool>();
      o.gcd_degree = oj.at("gcd_degree").get<int>();
      o.certificate = oj.at("certificate").get<std::string>();
      rec.oracle = o;
    }
    if (t.contains("quadratic_degenerate")) rec.quadratic_degenerate = t.at("quadratic_degenerate").get<bool>();
    if (t.contains("pipeline_agrees")) rec.pipeline_agrees = t.at("pipeline_agrees").get<bool>();
    if (t.contains("dumped_to")) rec.dumped_to = t.at("dumped_to").get<std::string>();
    r.trials.push_back(std::move(rec));
  }
  detail::finalize(r);
  if (r.mode == ExperimentMode::QuadraticSweep) {
    r.disagreements = static_cast<std::size_t>(std::count_if(
        r.trials.begin(), r.trials.end(), [](const TrialRecord& t) { return t.pipeline_agrees && !*t.pipeline_agrees; }));
  }
  return r;
}

/// One row per trial.
inline std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "seed,critical_count,sosc_count,fonc_only_count,degenerate_count,min_margin\n";
  for (const auto& t : r.trials) {
    os << t.seed << ',' << t.critical_count << ',' << t.histogram[static_cast<std::size_t>(Verdict::Sosc)] << ','
       << t.histogram[static_cast<std::size_t>(Verdict::FoncOnly)] << ','
       << t.histogram[static_cast<std::size_t>(Verdict::SoncDegenerate)] << ','
       << (t.min_sosc_margin ? format_double(*t.min_sosc_margin) : std::string()) << '\n';
  }
  return os.str();
}

inline json to_json(const PointRecord& p) {
  json j = to_json(p.point);
  j["bordered_det"] = p.bordered_det;
  j["det_scale"] = p.det_scale;
  if (p.witness) j["witness"] = to_json(*p.witness);
  return j;
}

inline json to_json(const SuiteReport& s) {
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  json j = {{"suite", s.suite},
            {"n", s.n},
            {"d", s.d},
            {"passed", s.passed()},
            {"polynomial", polynomial_to_json(s.polynomial)},
            {"checks", checks},
            {"points", pts}};
  if (s.oracle) j["oracle"] = to_json(*s.oracle);
  return j;
}

}  // namespace sphopt
