#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "hopdam/checks.hpp"

using namespace hopdam;

namespace {

CheckRequest request(const std::string& check, int n, double k_re, std::vector<double> lambda = {}) {
  CheckRequest r;
  r.check = check;
  r.n = n;
  r.k = k_re;
  r.lambda = std::move(lambda);
  return r;
}

}  // namespace

TEST(Rng, PortableGenerator) {
  std::mt19937_64 g;
  g.discard(9999);
  EXPECT_EQ(g(), 9981545732273789042ULL);
  std::mt19937_64 raw(42);
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform();
    EXPECT_EQ(u, static_cast<double>(raw() >> 11) / 9007199254740992.0);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, SameSeedSameDraws) {
  const CheckRequest a = request("series-check", 2, 0.3);
  const Report r1 = run_check(a), r2 = run_check(a);
  EXPECT_EQ(r1.values["lambdas"], r2.values["lambdas"]);
  CheckRequest b = a;
  b.seed = 2;
  EXPECT_NE(run_check(b).values["lambdas"], r1.values["lambdas"]);
}

TEST(Report, JsonRoundTrip) {
  Report r = run_check(request("transform-check", 2, 0.3, {1.7, 0.2, -1.9}));
  r.add_metric("infinite", std::numeric_limits<double>::infinity(), 1.0);
  r.skip_reason = "example";
  const std::string text = to_json(r).dump();
  const Report back = report_from_json(json::parse(text));
  EXPECT_EQ(back, r);
  const Report plain = run_check(request("coeff", 1, 0.3));
  EXPECT_EQ(report_from_json(json::parse(to_json(plain).dump(2))), plain);
}

TEST(Report, JsonSchemaKeys) {
  const json j = to_json(run_check(request("roots", 2, 0.0)));
  const std::vector<std::string> keys{"check", "params", "values", "metrics", "pass", "skip_reason", "elapsed_ms", "version", "seed"};
  std::vector<std::string> got;
  for (const auto& [key, value] : j.items()) got.push_back(key);
  EXPECT_EQ(got, keys);
  EXPECT_TRUE(j["params"]["k"].is_array());
  EXPECT_EQ(j["params"]["k"].size(), 2u);
}

TEST(Report, CsvRows) {
  const Report r = run_check(request("rhs", 2, -0.25, {1.5, 0.2, -1.7}));
  const std::string rows = to_csv_rows(r);
  EXPECT_EQ(std::string(kCsvHeader), "check,n,k_re,k_im,lambda,metric,value,tol,pass");
  EXPECT_NE(rows.find("rhs,2,-0.25,0,\"1.5,0.2,-1.7\",factorization_rel_dev,"), std::string::npos) << rows;
  EXPECT_NE(rows.find(",1e-12,true"), std::string::npos);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 2);
  Report s = r;
  s.skip_reason = "outside";
  EXPECT_NE(to_csv_rows(s).find(",skipped,,,false"), std::string::npos);
}

TEST(Request, UsageErrors) {
  EXPECT_THROW(run_check(request("bogus", 1, 0.3)), usage_error);
  EXPECT_THROW(run_check(request("coeff", 2, 0.3, {1, -1})), usage_error);
  EXPECT_THROW(run_check(request("coeff", 0, 0.3)), usage_error);
  CheckRequest r = request("coeff", 2, 0.3);
  r.w = "1,1,2";
  EXPECT_THROW(run_check(r), usage_error);
  r.w = "3,1,2";
  EXPECT_NO_THROW(run_check(r));
  EXPECT_THROW(run_suite({}, request("", 1, 0.3)), usage_error);
  EXPECT_THROW(run_suite({"roots", "nope"}, request("", 1, 0.3)), usage_error);
}

TEST(Request, LambdaIsCentered) {
  CheckRequest r = request("coeff", 1, 0.3, {1.0, 0.0});
  const auto warnings = normalize_request(r);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_DOUBLE_EQ(r.lambda[0], 0.5);
  EXPECT_DOUBLE_EQ(r.lambda[1], -0.5);
}

TEST(Suite, DuplicatesAreDroppedWithWarning) {
  const SuiteResult s = run_suite({"roots", "coeff", "roots"}, request("", 1, 0.3));
  ASSERT_EQ(s.reports.size(), 2u);
  EXPECT_EQ(s.reports[0].check, "roots");
  EXPECT_EQ(s.reports[1].check, "coeff");
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("duplicate"), std::string::npos);
}

TEST(Examples, TransformCheck) {
  CheckRequest r = request("transform-check", 2, 0.3, {1.7, 0.2, -1.9});
  r.order = 6;
  r.tol = 1e-9;
  const Report rep = run_check(r);
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.metrics.count("max_rel_dev"));
  EXPECT_LE(rep.metrics.at("max_rel_dev").value, 1e-9);
}

TEST(Examples, RhsAllPermutations) {
  CheckRequest r = request("rhs", 2, -0.25, {1.5, 0.2, -1.7});
  r.w = "all";
  const Report rep = run_check(r);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.values["rhs_times_phase"].size(), 6u);
  EXPECT_LE(rep.metrics.at("phase_spread").value, 1e-12);
}

TEST(Examples, OpdamAtKZero) {
  const Report rep = run_check(request("opdam-check", 1, 0.0, {1.2, -1.2}));
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.values["series_limit"][0].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(rep.values["closed_form"][0].get<double>(), 1.0, 1e-15);
}

TEST(Examples, SkipIsNeverPass) {
  const Report rep = run_check(request("opdam-check", 3, -0.3));
  EXPECT_TRUE(rep.skipped());
  EXPECT_FALSE(rep.pass);
  const Report sel = run_check(request("selberg", 1, 0.3));
  EXPECT_TRUE(sel.skipped());
  EXPECT_FALSE(sel.pass);
  const SuiteResult s = run_suite({"opdam-check"}, request("", 3, -0.3));
  EXPECT_EQ(s.skipped, 1);
  EXPECT_TRUE(s.ok());
}

TEST(Examples, FailureIsReported) {
  CheckRequest r = request("transform-check", 2, 0.3);
  r.tol = 1e-30;
  const Report rep = run_check(r);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.skipped());
}

TEST(Examples, NumericalErrorBecomesFailedReport) {
  // a degenerate lambda makes the closed forms singular
  const Report rep = run_check(request("coeff", 1, 0.3, {0.5, -0.5}));
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.values.contains("error"));
}

TEST(Suite, AllAtRankOne) {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult s = run_suite({"all"}, request("", 1, -0.3));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(s.reports.size(), check_names().size());
  EXPECT_GE(s.passed, 8);
  EXPECT_EQ(s.failed, 0);
  EXPECT_LT(seconds, 120.0);
  for (const auto& r : s.reports) {
    EXPECT_TRUE(r.pass) << to_text(r);
    for (const auto& [name, m] : r.metrics) EXPECT_LE(m.value, m.tol) << r.check << " " << name;
  }
  const json j = to_json(s);
  EXPECT_EQ(j["summary"]["pass"].get<int>(), s.passed);
}
