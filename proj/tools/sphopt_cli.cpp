// sphopt: critical points of homogeneous polynomials on the unit sphere.
//
// Exit codes: 0 success, 1 usage or input error, 2 polynomial file parse
// error, 3 zero polynomial, 4 point not critical, 5 a suite or experiment
// found what it must not (failed witness check, degenerate hit).

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphopt/genlab.hpp"

using namespace sphopt;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kZero = 3, kNotCritical = 4, kSuiteFailed = 5 };

std::string vec17(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + "]";
}

Vector parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos) {
      throw InputError("invalid --point component \"" + tok + "\"");
    }
    vals.push_back(v);
  }
  if (vals.empty()) throw InputError("--point is empty");
  return Vector::Map(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct SearchFlags {
  int starts = 0;
  std::uint64_t seed = 0;
  double tol_crit = 1e-9;
  double dedup_radius = 1e-6;

  void attach(CLI::App* app) {
    app->add_option("--starts", starts, "multistart count (default 50*d*n, at most 20000)")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "master seed");
    app->add_option("--tol-crit", tol_crit, "FONC tolerance, scaled by max(1, |f|)")->check(CLI::PositiveNumber);
    app->add_option("--dedup-radius", dedup_radius, "merge radius for converged points")->check(CLI::PositiveNumber);
  }

  AnalysisConfig config() const {
    AnalysisConfig cfg;
    cfg.search.starts = starts;
    cfg.search.seed = seed;
    cfg.search.dedup_radius = dedup_radius;
    cfg.tol.tol_crit = tol_crit;
    return cfg;
  }
};

void print_suite(const SuiteReport& r) {
  std::cout << r.suite << " n=" << r.n << " d=" << r.d << "\n";
  for (const auto& c : r.checks) {
    std::cout << "  [" << (c.passed ? "ok" : "FAILED") << "] " << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  std::cout << "suite " << (r.passed() ? "PASS" : "FAIL") << "\n";
}

std::string default_report_path(const std::string& stem, const std::string& given) {
  return given.empty() ? stem + ".json" : given;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points of homogeneous polynomials on the unit sphere"};
  app.require_subcommand(1);

  // classify
  auto* classify = app.add_subcommand("classify", "find and classify all critical points");
  std::string poly_path;
  SearchFlags search;
  bool as_json = false;
  bool as_csv = false;
  classify->add_option("--poly", poly_path, "polynomial JSON file")->required();
  search.attach(classify);
  auto* json_flag = classify->add_flag("--json", as_json, "print points as JSON");
  classify->add_flag("--csv", as_csv, "print points as CSV")->excludes(json_flag);

  // detect
  auto* detect = app.add_subcommand("detect", "look for an SOSC failure witness at a critical point");
  std::string point_text;
  detect->add_option("--poly", poly_path, "polynomial JSON file")->required();
  detect->add_option("--point", point_text, "comma-separated coordinates")->required();

  // oracle2
  auto* oracle2 = app.add_subcommand("oracle2", "exact degeneracy decision for n = 2");
  oracle2->add_option("--poly", poly_path, "polynomial JSON file")->required();
  oracle2->add_flag("--json", as_json, "print the result as JSON");

  // witness
  auto* witness = app.add_subcommand("witness", "run a deterministic witness suite");
  std::string mode;
  std::string kind_name;
  int n = 0;
  int d = 0;
  std::string out_path;
  witness->add_option("--mode", mode, "d2 | general | degenerate")
      ->required()
      ->check(CLI::IsMember({"d2", "general", "degenerate"}));
  witness->add_option("--n", n, "variables")->required()->check(CLI::PositiveNumber);
  witness->add_option("--d", d, "degree (general, degenerate)")->check(CLI::PositiveNumber);
  witness->add_option("--kind", kind_name, "degenerate family: repeated_lambda1 | single_monomial")
      ->check(CLI::IsMember({"repeated_lambda1", "single_monomial"}));
  witness->add_option("--out", out_path, "write the full suite report as JSON");

  // sample
  auto* sample = app.add_subcommand("sample", "random genericity experiment");
  int trials = 0;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string dump_dir;
  sample->add_option("--n", n, "variables")->required()->check(CLI::PositiveNumber);
  sample->add_option("--d", d, "degree")->required()->check(CLI::PositiveNumber);
  sample->add_option("--trials", trials, "random polynomials")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "master seed")->required();
  sample->add_option("--out", out_path, "JSON report (default sample_n<N>_d<D>_seed<S>.json)");
  sample->add_option("--csv", csv_path, "also write one CSV row per trial");
  sample->add_option("--dump-dir", dump_dir, "where polynomials with degenerate hits go (default: next to the report)");

  // quad
  auto* quad = app.add_subcommand("quad", "quadratic sweep: eigenvalue test vs full pipeline");
  quad->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
  quad->add_option("--trials", trials, "random symmetric matrices")->required()->check(CLI::PositiveNumber);
  quad->add_option("--seed", seed, "master seed")->required();
  quad->add_option("--out", out_path, "JSON report (default quad_n<N>_seed<S>.json)");
  quad->add_option("--csv", csv_path, "also write one CSV row per trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (classify->parsed()) {
      const auto f = read_polynomial_file(poly_path);
      const auto pts = classify_all(f, search.config());
      if (as_json) {
        std::cout << dump_json(to_json(pts)) << "\n";
      } else if (as_csv) {
        std::cout << "x,lambda,residual,margin,verdict\n";
        for (const auto& cp : pts) {
          std::string xs;
          for (Eigen::Index i = 0; i < cp.pair.x.size(); ++i) xs += (i ? " " : "") + format_double(cp.pair.x[i]);
          std::cout << xs << ',' << format_double(cp.pair.lambda) << ',' << format_double(cp.pair.residual) << ','
                    << format_double(cp.sosc_margin) << ',' << to_string(cp.verdict) << "\n";
        }
      } else {
        for (const auto& cp : pts) {
          std::cout << to_string(cp.verdict) << "  x = " << vec17(cp.pair.x)
                    << "  lambda = " << format_double(cp.pair.lambda)
                    << "  margin = " << format_double(cp.sosc_margin) << "\n";
        }
        std::cout << "points: " << pts.size() << "\n";
        for (auto v : {Verdict::Sosc, Verdict::FoncOnly, Verdict::SoncDegenerate}) {
          std::cout << to_string(v) << ": " << count_verdict(pts, v) << "\n";
        }
      }
      return kOk;
    }

    if (detect->parsed()) {
      const auto f = read_polynomial_file(poly_path);
      Vector x = parse_point(point_text);
      detail::check_dim(f, static_cast<std::size_t>(x.size()));
      if (x.norm() == 0.0) throw InputError("--point must be nonzero");
      if (std::abs(x.norm() - 1.0) > 1e-6) {
        std::cerr << "warning: --point normalized (|x| = " << format_double(x.norm()) << ")\n";
      }
      x /= x.norm();
      try {
        const auto w = detect_sosc_failure(f, x);
        if (w) {
          std::optional<OracleResult> oracle;
          if (f.num_vars() == 2) oracle = exact_oracle_n2(f);
          std::cout << dump_json(to_json(*w, oracle)) << "\n";
        } else {
          const auto cp = classify_point(f, x);
          std::cout << "no witness: SOSC margin = " << format_double(cp.sosc_margin) << " ("
                    << to_string(cp.verdict) << ")\n";
        }
      } catch (const NotCriticalError& e) {
        std::cerr << "error: point is not critical, FONC residual = " << format_double(e.residual()) << "\n";
        return kNotCritical;
      }
      return kOk;
    }

    if (oracle2->parsed()) {
      const auto f = read_polynomial_file(poly_path);
      const auto r = exact_oracle_n2(f);
      if (as_json) {
        std::cout << dump_json(to_json(r)) << "\n";
      } else {
        std::cout << "on_locus: " << (r.on_locus ? "true" : "false") << "\n"
                  << "certificate: " << r.certificate << "\n";
      }
      return kOk;
    }

    if (witness->parsed()) {
      SuiteReport r;
      if (mode == "d2") {
        r = run_witness_d2(n);
      } else if (mode == "general") {
        if (d == 0) throw InputError("--mode general needs --d");
        r = run_witness_general(n, d);
      } else {
        if (d == 0) throw InputError("--mode degenerate needs --d");
        DegenerateKind kind = d == 2 ? DegenerateKind::RepeatedLambda1 : DegenerateKind::SingleMonomial;
        if (kind_name == "repeated_lambda1") kind = DegenerateKind::RepeatedLambda1;
        if (kind_name == "single_monomial") kind = DegenerateKind::SingleMonomial;
        r = run_degenerate_family(kind, n, d);
      }
      print_suite(r);
      if (!out_path.empty()) write_text_file(out_path, dump_json(to_json(r)) + "\n");
      return r.passed() ? kOk : kSuiteFailed;
    }

    if (sample->parsed()) {
      ExperimentConfig cfg;
      cfg.n = n;
      cfg.d = d;
      cfg.trials = trials;
      cfg.seed = seed;
      out_path = default_report_path(
          "sample_n" + std::to_string(n) + "_d" + std::to_string(d) + "_seed" + std::to_string(seed), out_path);
      if (dump_dir.empty()) {
        const auto parent = std::filesystem::path(out_path).parent_path();
        dump_dir = parent.empty() ? "." : parent.string();
      }
      cfg.dump_dir = dump_dir;
      const auto rep = run_random_genericity(cfg);
      write_text_file(out_path, dump_json(to_json(rep)) + "\n");
      if (!csv_path.empty()) write_text_file(csv_path, to_csv(rep));
      std::cout << "trials: " << rep.trials.size() << "\n"
                << "degenerate_hits: " << rep.total_degenerate << "\n"
                << "rank_witnesses: " << rep.total_rank_witnesses << "\n"
                << "min_sosc_margin: " << (rep.margins ? format_double(rep.margins->min) : "none") << "\n"
                << "report: " << out_path << "\n";
      for (const auto& t : rep.trials) {
        if (!t.dumped_to.empty()) std::cout << "dumped: " << t.dumped_to << "\n";
      }
      return rep.total_degenerate == 0 && rep.total_rank_witnesses == 0 ? kOk : kSuiteFailed;
    }

    if (quad->parsed()) {
      out_path = default_report_path("quad_n" + std::to_string(n) + "_seed" + std::to_string(seed), out_path);
      const auto rep = run_quadratic_sweep(n, trials, seed);
      write_text_file(out_path, dump_json(to_json(rep)) + "\n");
      if (!csv_path.empty()) write_text_file(csv_path, to_csv(rep));
      std::size_t eig_degenerate = 0;
      for (const auto& t : rep.trials) eig_degenerate += t.quadratic_degenerate.value_or(false);
      std::cout << "trials: " << rep.trials.size() << "\n"
                << "quadratic_degenerate: " << eig_degenerate << "\n"
                << "pipeline_degenerate_hits: " << rep.total_degenerate << "\n"
                << "disagreements: " << rep.disagreements << "\n"
                << "report: " << out_path << "\n";
      return rep.disagreements == 0 ? kOk : kSuiteFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ZeroPolynomialError& e) {
    std::cerr << "error: zero polynomial: " << e.what() << "\n";
    return kZero;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
