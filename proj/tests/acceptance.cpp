// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/QR>

#include "sphopt/genlab.hpp"

using namespace sphopt;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string failed_checks(const SuiteReport& r) {
  std::string s;
  for (const auto& c : r.checks) {
    if (!c.passed) s += r.suite + " n=" + std::to_string(r.n) + " d=" + std::to_string(r.d) + ": " + c.name + " ";
  }
  return s;
}

bool run(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o = body();
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.require(secs < limit_s, "runtime " + g(secs) + " s exceeds " + g(limit_s) + " s");
  std::printf("criterion %d %s  %s (%.2f s)%s%s\n", id, o.ok ? "PASS" : "FAIL", title.c_str(), secs,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
  return o.ok;
}

// Suites shared between criteria 1-3 and 7.
std::vector<SuiteReport> d2_suites;
std::vector<SuiteReport> general_suites;
std::vector<SuiteReport> degenerate_suites;

Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v / v.norm();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string dump_dir = "acceptance_dumps";
  app.add_option("--dump-dir", dump_dir, "where polynomials with degenerate hits are written");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  const Tolerances tol;

  all &= run(1, "quadratic witness suite, n = 2..5", 5.0, [] {
    Outcome o;
    for (int n = 2; n <= 5; ++n) {
      d2_suites.push_back(run_witness_d2(n));
      o.require(d2_suites.back().passed(), failed_checks(d2_suites.back()));
    }
    // n = 3, l = 1 has det H = -2.
    const auto& e1 = d2_suites[1].points.front();
    o.require(std::abs(e1.bordered_det + 2.0) <= 1e-12, "det H(e1, 1) = " + g(e1.bordered_det) + ", expected -2");
    o.detail = o.ok ? "det H(e1,1) = " + format_double(e1.bordered_det) + " at n=3" : o.detail;
    return o;
  });

  all &= run(2, "power-sum witness suite, d in {1,3,4,5}, n in {2,3}", 30.0, [] {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    for (int d : {1, 3, 4, 5}) {
      for (int n : {2, 3}) {
        general_suites.push_back(run_witness_general(n, d));
        const auto& r = general_suites.back();
        o.require(r.passed(), failed_checks(r));
        if (n == 2) o.require(r.oracle && !r.oracle->on_locus, "oracle on locus at d=" + std::to_string(d));
        for (const auto& p : r.points) worst = std::min(worst, std::abs(p.bordered_det) / p.det_scale);
      }
    }
    if (o.ok) o.detail = "min |det H|/scale = " + g(worst) + " (> 1e-6)";
    return o;
  });
  {
    // Reference only: the cruder scale (1 + |hess|_F + |lambda|)^(n+1).
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : general_suites) {
      for (const auto& p : r.points) {
        const Matrix h = hessian(r.polynomial, p.point.pair.x);
        const double s = std::pow(1.0 + h.norm() + std::abs(p.point.pair.lambda), r.n + 1);
        worst = std::min(worst, std::abs(p.bordered_det) / s);
      }
    }
    std::printf("info        criterion 2 with (1+|hess|_F+|lambda|)^(n+1) scaling: min ratio %s\n", g(worst).c_str());
  }

  all &= run(3, "degenerate detection", 10.0, [] {
    Outcome o;
    // (a) A = diag(1, 1, 2).
    degenerate_suites.push_back(run_degenerate_family(DegenerateKind::RepeatedLambda1, 3, 2));
    // (b) x1^d.
    for (int d : {3, 4}) {
      for (int n : {2, 3}) degenerate_suites.push_back(run_degenerate_family(DegenerateKind::SingleMonomial, n, d));
    }
    double worst_sigma3 = 0.0;
    double worst_det = 0.0;
    std::size_t witnesses = 0;
    for (const auto& r : degenerate_suites) {
      o.require(r.passed(), failed_checks(r));
      if (r.n == 2) o.require(r.oracle && r.oracle->on_locus, "oracle misses " + r.suite);
      for (const auto& p : r.points) {
        if (!p.witness) continue;
        ++witnesses;
        worst_sigma3 = std::max(worst_sigma3, p.witness->rank_defect_measure);
        worst_det = std::max(worst_det, std::abs(p.witness->bordered_det) / p.witness->det_scale);
      }
    }
    o.require(worst_sigma3 <= 1e-6, "third singular value " + g(worst_sigma3));
    o.require(worst_det <= 1e-6, "|det H|/scale " + g(worst_det));
    if (o.ok) {
      o.detail = std::to_string(witnesses) + " witnesses, max sigma3 " + g(worst_sigma3) + ", max |det|/scale " +
                 g(worst_det);
    }
    return o;
  });

  all &= run(4, "random genericity, 1000 trials x {(2,3),(3,3),(2,4),(3,4)}", 600.0, [&] {
    Outcome o;
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    for (auto [n, d] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{2, 4}, std::pair{3, 4}}) {
      ExperimentConfig cfg;
      cfg.n = n;
      cfg.d = d;
      cfg.trials = 1000;
      cfg.seed = 20240 + 10 * n + d;
      cfg.dump_dir = dump_dir;
      const auto rep = run_random_genericity(cfg);
      const std::string tag = "(" + std::to_string(n) + "," + std::to_string(d) + ")";
      o.require(rep.total_degenerate == 0, tag + " " + std::to_string(rep.total_degenerate) + " SONC_DEGENERATE");
      o.require(rep.total_rank_witnesses == 0, tag + " " + std::to_string(rep.total_rank_witnesses) + " rank witnesses");
      for (const auto& t : rep.trials) {
        points += t.critical_count;
        if (!t.dumped_to.empty()) o.require(false, "dumped " + t.dumped_to);
      }
      o.require(rep.margins.has_value(), tag + " no SOSC point");
      if (rep.margins) min_margin = std::min(min_margin, rep.margins->min);
    }
    o.require(min_margin > 0.0, "min SOSC margin " + g(min_margin));
    if (o.ok) o.detail = std::to_string(points) + " critical points, min SOSC margin " + g(min_margin);
    return o;
  });

  all &= run(5, "n=2 multistart vs exact enumeration, 100 polynomials", 120.0, [] {
    Outcome o;
    int certified = 0;
    std::string misses;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const int d = 3 + static_cast<int>(s % 3);
      const std::uint64_t seed = derive_seed(5005, s);
      CritConfig cfg;
      cfg.seed = derive_seed(seed, 1);
      const auto rep = certify_against_oracle(random_polynomial(2, d, seed), cfg);
      if (rep.certified) {
        ++certified;
      } else {
        misses += " seed=" + std::to_string(seed) + "(d=" + std::to_string(d) + ", +" +
                  std::to_string(rep.only_multistart.size()) + "/-" + std::to_string(rep.only_oracle.size()) + ")";
      }
    }
    o.require(certified >= 99, std::to_string(certified) + "/100 certified;" + misses);
    if (o.ok) o.detail = std::to_string(certified) + "/100 certified" + (misses.empty() ? "" : ";" + misses);
    return o;
  });

  all &= run(6, "calculus invariants on 500 random (f, x), n <= 5, d <= 6", 60.0, [] {
    Outcome o;
    std::mt19937_64 rng(6006);
    double euler = 0.0;
    double fd = 0.0;
    double basis = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 5);
      const int d = 1 + static_cast<int>(rng() % 6);
      const auto f = random_polynomial(n, d, rng());
      const Vector x = random_unit(n, rng) * std::uniform_real_distribution<double>(0.5, 2.0)(rng);
      const Vector gr = gradient(f, x);
      const Matrix he = hessian(f, x);
      const double scale = f.coefficient_norm() * std::pow(std::max(1.0, x.norm()), d);
      euler = std::max(euler, std::abs(gr.dot(x) - d * evaluate(f, x)) / scale);
      euler = std::max(euler, (he * x - (d - 1) * gr).norm() / scale);

      const double h = 1e-5 * std::max(1.0, x.norm());
      Vector fg(n);
      Matrix fh(n, n);
      for (int i = 0; i < n; ++i) {
        const Vector e = Vector::Unit(n, i) * h;
        fg[i] = (evaluate(f, x + e) - evaluate(f, x - e)) / (2 * h);
        fh.col(i) = (gradient(f, x + e) - gradient(f, x - e)) / (2 * h);
      }
      fd = std::max(fd, (fg - gr).norm() / std::max(1.0, gr.norm()));
      fd = std::max(fd, (fh - he).norm() / std::max(1.0, he.norm()));

      if (n >= 2) {
        const Vector u = x / x.norm();
        Matrix m(n, n);
        m.col(0) = u;
        for (int j = 1; j < n; ++j) m.col(j) = random_unit(n, rng);
        const Matrix q = Eigen::HouseholderQR<Matrix>(m).householderQ();
        const auto a = tangent_spectrum(f, u);
        const auto b = tangent_spectrum_in_basis(f, u, q.rightCols(n - 1));
        const double s = std::max(1.0, a.eigenvalues.cwiseAbs().maxCoeff());
        basis = std::max(basis, (a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() / s);
      }
    }
    o.require(euler <= 1e-10, "Euler deviation " + g(euler));
    o.require(fd <= 1e-5, "finite-difference deviation " + g(fd));
    o.require(basis <= 1e-10, "basis dependence " + g(basis));
    if (o.ok) o.detail = "Euler " + g(euler) + ", finite differences " + g(fd) + ", basis " + g(basis);
    return o;
  });

  all &= run(7, "witness converse on degenerate points, no tangent witness at SOSC points", 30.0, [&] {
    Outcome o;
    std::size_t converse = 0;
    for (const auto& r : degenerate_suites) {
      const double ct = crit_tolerance(r.polynomial, tol.tol_crit);
      const double kt = class_tolerance(r.polynomial, tol.tol_class);
      for (const auto& p : r.points) {
        if (!p.witness) continue;
        ++converse;
        const auto rec = reconstruct_from_witness(r.polynomial, p.witness->x, p.witness->y);
        o.require(rec.fonc_residual <= ct, r.suite + " FONC residual " + g(rec.fonc_residual));
        o.require(rec.sosc_margin <= kt, r.suite + " margin " + g(rec.sosc_margin));
      }
    }
    o.require(converse > 0, "no witnesses to check");
    std::size_t sosc = 0;
    double closest = std::numeric_limits<double>::infinity();
    for (const auto* suites : {&d2_suites, &general_suites}) {
      for (const auto& r : *suites) {
        for (const auto& p : r.points) {
          if (p.point.verdict != Verdict::Sosc) continue;
          ++sosc;
          const auto scan = scan_tangent_witnesses(r.polynomial, p.point.pair.x, tol);
          o.require(!scan.any_rank_deficient, r.suite + " rank-deficient tangent witness");
          for (std::size_t k = 0; k < scan.thresholds.size(); ++k) {
            closest = std::min(closest, scan.third_singular_values[k] / scan.thresholds[k]);
          }
        }
      }
    }
    o.require(sosc > 0, "no SOSC points to check");
    if (o.ok) {
      o.detail = std::to_string(converse) + " witnesses reconstructed, " + std::to_string(sosc) +
                 " SOSC points scanned, min sigma3/tol_rank " + g(closest);
    }
    return o;
  });

  all &= run(8, "quadratic equivalence, 500 random A (n=5) and planted k in {2,3}", 120.0, [] {
    Outcome o;
    const auto rep = run_quadratic_sweep(5, 500, 8008);
    o.require(rep.disagreements == 0, std::to_string(rep.disagreements) + " disagreements");
    for (int k : {2, 3}) {
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto q = check_quadratic(planted_symmetric(5, k, derive_seed(88, 10 * k + s)));
        o.require(q.eig.degenerate && q.eig.lambda1_multiplicity == k, "eigen test misses k=" + std::to_string(k));
        o.require(q.pipeline_degenerate && q.witness_at_minimizer, "pipeline misses k=" + std::to_string(k));
      }
    }
    if (o.ok) o.detail = "0 disagreements, " + std::to_string(rep.total_degenerate) + " random degenerate, 20 planted detected";
    return o;
  });

  std::printf("acceptance %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
