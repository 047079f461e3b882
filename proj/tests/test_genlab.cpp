#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "sphopt/genlab.hpp"

using namespace sphopt;

namespace {

std::string failed_checks(const SuiteReport& r) {
  std::string s;
  for (const auto& c : r.checks) {
    if (!c.passed) s += c.name + " (" + c.detail + "); ";
  }
  return s;
}

const PointRecord* record_at(const SuiteReport& r, const Vector& x) {
  for (const auto& p : r.points) {
    if ((p.point.pair.x - x).norm() < 1e-12) return &p;
  }
  return nullptr;
}

ExperimentConfig small_config(int n, int d, int trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(WitnessSuites, QuadraticN3) {
  const auto r = run_witness_d2(3);
  EXPECT_TRUE(r.passed()) << failed_checks(r);
  const auto* e1 = record_at(r, Vector::Unit(3, 0));
  ASSERT_NE(e1, nullptr);
  EXPECT_NEAR(e1->bordered_det, -2.0, 1e-14);
  EXPECT_EQ(e1->point.verdict, Verdict::Sosc);
  std::size_t sosc = 0;
  for (const auto& p : r.points) sosc += p.point.verdict == Verdict::Sosc;
  EXPECT_EQ(sosc, 2u);
}

TEST(WitnessSuites, QuadraticN2MinimizerMargin) {
  const auto r = run_witness_d2(2);
  EXPECT_TRUE(r.passed()) << failed_checks(r);
  for (double s : {1.0, -1.0}) {
    const auto* p = record_at(r, s * Vector::Unit(2, 0));
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->point.verdict, Verdict::Sosc);
    EXPECT_NEAR(p->point.sosc_margin, 1.0, 1e-12);
  }
}

TEST(WitnessSuites, QuadraticRejectsN1) { EXPECT_THROW(run_witness_d2(1), InputError); }

TEST(WitnessSuites, PowerSumCoefficients) {
  const auto p = witness_power_sum(3, 4);
  EXPECT_EQ(p.coefficient({4, 0, 0}), 4.0);
  EXPECT_EQ(p.coefficient({0, 4, 0}), 16.0);
  EXPECT_EQ(p.coefficient({0, 0, 4}), 64.0);
  const auto q = witness_power_sum(2, 1);
  EXPECT_EQ(q.coefficient({1, 0}), 0.5);
  EXPECT_EQ(q.coefficient({0, 1}), 0.25);
}

TEST(WitnessSuites, PowerSumCubicAndQuartic) {
  for (int d : {3, 4}) {
    const auto r = run_witness_general(2, d);
    EXPECT_TRUE(r.passed()) << "d=" << d << ": " << failed_checks(r);
    ASSERT_TRUE(r.oracle.has_value());
    EXPECT_FALSE(r.oracle->on_locus);
    for (const auto& p : r.points) EXPECT_GT(std::abs(p.bordered_det), 0.0);
  }
}

TEST(WitnessSuites, ClosedFormCountsMatchSolver) {
  // Odd d: one direction per support, two signs. Even d: every sign pattern.
  const Vector c = Eigen::Vector3d(2.0, 4.0, 8.0);
  EXPECT_EQ(power_sum_critical_points(c, 3).size(), 14u);
  EXPECT_EQ(power_sum_critical_points(c, 4).size(), 26u);
  EXPECT_EQ(power_sum_critical_points(c, 1).size(), 2u);
  EXPECT_THROW(power_sum_critical_points(c, 2), InputError);
  EXPECT_THROW(power_sum_critical_points(Vector::Ones(5), 3), InputError);
}

TEST(WitnessSuites, GeneralRejectsQuadratic) { EXPECT_THROW(run_witness_general(2, 2), InputError); }

TEST(DegenerateFamilies, MonomialN2) {
  const auto r = run_degenerate_family(DegenerateKind::SingleMonomial, 2, 3);
  EXPECT_TRUE(r.passed()) << failed_checks(r);
  ASSERT_TRUE(r.oracle.has_value());
  EXPECT_TRUE(r.oracle->on_locus);
  for (double s : {1.0, -1.0}) {
    const auto* p = record_at(r, s * Vector::Unit(2, 1));
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->point.verdict, Verdict::SoncDegenerate);
  }
}

TEST(DegenerateFamilies, QuarticCircle) {
  const auto r = run_degenerate_family(DegenerateKind::SingleMonomial, 3, 4);
  EXPECT_TRUE(r.passed()) << failed_checks(r);
}

TEST(DegenerateFamilies, RepeatedLeastEigenvalue) {
  for (int n : {2, 3}) {
    const auto r = run_degenerate_family(DegenerateKind::RepeatedLambda1, n, 2);
    EXPECT_TRUE(r.passed()) << "n=" << n << ": " << failed_checks(r);
  }
  EXPECT_EQ(repeated_lambda1_matrix(3), Eigen::Vector3d(1, 1, 2).asDiagonal().toDenseMatrix());
}

TEST(DegenerateFamilies, InvalidCombinations) {
  EXPECT_THROW(run_degenerate_family(DegenerateKind::RepeatedLambda1, 3, 3), InputError);
  EXPECT_THROW(run_degenerate_family(DegenerateKind::SingleMonomial, 3, 2), InputError);
  EXPECT_THROW(run_degenerate_family(DegenerateKind::SingleMonomial, 1, 3), InputError);
}

TEST(QuadraticSweep, RandomMatricesAgree) {
  const auto rep = run_quadratic_sweep(5, 60, 3);
  EXPECT_EQ(rep.disagreements, 0u);
  EXPECT_EQ(rep.total_degenerate, 0u);
  for (const auto& t : rep.trials) {
    ASSERT_TRUE(t.quadratic_degenerate.has_value());
    EXPECT_FALSE(*t.quadratic_degenerate);
  }
}

TEST(QuadraticSweep, PlantedMultiplicityDetectedByBoth) {
  for (int k : {2, 3}) {
    const Matrix a = planted_symmetric(5, k, 10 + k);
    const auto q = check_quadratic(a);
    EXPECT_EQ(q.eig.lambda1_multiplicity, k);
    EXPECT_TRUE(q.pipeline_degenerate);
    EXPECT_TRUE(q.witness_at_minimizer);
    EXPECT_TRUE(q.agree());
  }
}

TEST(QuadraticSweep, IdentityIsDegenerate) {
  const auto q = check_quadratic(Matrix::Identity(3, 3));
  EXPECT_TRUE(q.eig.degenerate);
  EXPECT_TRUE(q.witness_at_minimizer);
  EXPECT_TRUE(q.pipeline_degenerate);
}

TEST(RandomGenericity, SmallRunHasNoDegeneratePoints) {
  const auto rep = run_random_genericity(small_config(2, 3, 50, 7));
  EXPECT_EQ(rep.total_degenerate, 0u);
  EXPECT_EQ(rep.total_rank_witnesses, 0u);
  ASSERT_TRUE(rep.margins.has_value());
  EXPECT_GT(rep.margins->min, 0.0);
  EXPECT_LE(rep.margins->min, rep.margins->q05);
  EXPECT_LE(rep.margins->q05, rep.margins->median);
  EXPECT_LE(rep.margins->median, rep.margins->q95);
  EXPECT_LE(rep.margins->q95, rep.margins->max);
  for (const auto& t : rep.trials) {
    ASSERT_TRUE(t.oracle.has_value());
    EXPECT_FALSE(t.oracle->on_locus);
  }
}

TEST(RandomGenericity, QuadraticTrialsRecordEigenTest) {
  const auto rep = run_random_genericity(small_config(2, 2, 30, 1));
  for (const auto& t : rep.trials) {
    ASSERT_TRUE(t.quadratic_degenerate.has_value());
    EXPECT_FALSE(*t.quadratic_degenerate);
  }
}

TEST(RandomGenericity, ConfigValidated) {
  EXPECT_THROW(run_random_genericity(small_config(2, 3, 0, 1)), InputError);
  EXPECT_THROW(run_random_genericity(small_config(0, 3, 1, 1)), InputError);
  EXPECT_THROW(run_random_genericity(small_config(2, 0, 1, 1)), InputError);
}

TEST(Reports, HistogramSumsToCriticalCount) {
  const auto rep = run_random_genericity(small_config(3, 3, 10, 11));
  for (const auto& t : rep.trials) {
    EXPECT_EQ(std::accumulate(t.histogram.begin(), t.histogram.end(), std::size_t{0}), t.critical_count);
    EXPECT_EQ(t.min_sosc_margin.has_value(), t.histogram[static_cast<std::size_t>(Verdict::Sosc)] > 0);
  }
}

TEST(Reports, JsonRoundTrip) {
  for (const auto& rep : {run_random_genericity(small_config(2, 4, 8, 5)), run_quadratic_sweep(3, 8, 2)}) {
    const std::string text = dump_json(to_json(rep));
    const auto back = experiment_report_from_json(json::parse(text));
    EXPECT_EQ(dump_json(to_json(back)), text);
    EXPECT_EQ(back.total_degenerate, rep.total_degenerate);
    EXPECT_EQ(back.disagreements, rep.disagreements);
  }
}

TEST(Reports, ReproducibleModuloRuntime) {
  const auto a = run_random_genericity(small_config(3, 4, 5, 42));
  const auto b = run_random_genericity(small_config(3, 4, 5, 42));
  EXPECT_EQ(dump_json(to_json(a)), dump_json(to_json(b)));
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(dump_json(to_json(a)).find("runtime"), std::string::npos);
  EXPECT_NE(dump_json(to_json(a, true)).find("runtime_seconds"), std::string::npos);
}

TEST(Reports, CsvLayout) {
  const auto rep = run_random_genericity(small_config(2, 3, 3, 9));
  const std::string csv = to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,critical_count,sosc_count,fonc_only_count,degenerate_count,min_margin");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Reports, SuiteJsonCarriesChecks) {
  const auto j = to_json(run_witness_d2(2));
  EXPECT_EQ(j["suite"], "witness_d2");
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_FALSE(j["checks"].empty());
  EXPECT_EQ(j["points"].size(), 4u);
}

TEST(Reports, DegeneratePolynomialDump) {
  const auto dir = std::filesystem::temp_directory_path() / "sphopt_dump_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = small_config(2, 3, 1, 0);
  cfg.dump_dir = dir.string();
  const auto f = single_monomial(2, 3, 0);
  const std::string path = detail::dump_polynomial(cfg, f, 123);
  EXPECT_EQ(path, (dir / "degenerate_n2_d3_seed123.json").string());
  EXPECT_EQ(read_polynomial_file(path), f);
  cfg.dump_dir.clear();
  EXPECT_EQ(detail::dump_polynomial(cfg, f, 123), "");
  std::filesystem::remove_all(dir);
}
