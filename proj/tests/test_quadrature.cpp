#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hopdam/quadrature.hpp"
#include "hopdam/special_fn.hpp"

using namespace hopdam;

namespace {

double beta_fn(double a, double b) { return std::exp(log_gamma(a).real() + log_gamma(b).real() - log_gamma(a + b).real()); }

double halton(std::size_t i, int base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::size_t>(base));
    i /= static_cast<std::size_t>(base);
  }
  return r;
}

// t1 in [0, 1], t2 in [0, t1], t3 in [0, t2]
struct Simplex3 {
  std::size_t dimension() const { return 3; }
  Slice slice(std::size_t level, std::span<const double> outer) const {
    return {0.0, level == 0 ? 1.0 : outer[level - 1]};
  }
};

// interlacing 0 < a < 1 < b < 2 with a <= c <= b
struct Interlacing {
  std::size_t dimension() const { return 3; }
  Slice slice(std::size_t level, std::span<const double> outer) const {
    if (level == 0) return {0.0, 1.0};
    if (level == 1) return {1.0, 2.0};
    return {outer[0], outer[1]};
  }
};

struct BetaBox {
  double a1, b1, a2, b2;
  std::size_t dimension() const { return 2; }
  Slice slice(std::size_t level, std::span<const double>) const {
    return level == 0 ? Slice{0.0, 1.0, a1, b1} : Slice{0.0, 1.0, a2, b2};
  }
};

// x3 < y2 < x2 < y1 < x1 with |y_i - x_j|^{s_j - 1}
struct DixonAnderson {
  double x1, x2, x3, s1, s2, s3;
  std::size_t dimension() const { return 2; }
  Slice slice(std::size_t level, std::span<const double>) const {
    return level == 0 ? Slice{x2, x1, s2 - 1, s1 - 1} : Slice{x3, x2, s3 - 1, s2 - 1};
  }
};

}  // namespace

TEST(GaussJacobi, LegendreMonomial) {
  const JacobiRule r = gauss_jacobi(0.0, 0.0, 3);
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 5);
  EXPECT_NEAR(s, 1.0 / 6.0, 1e-15);
}

TEST(GaussJacobi, InverseSqrtWeightMass) {
  const JacobiRule r = gauss_jacobi(-0.5, 0.0, 8);
  double s = 0;
  for (double w : r.weights) s += w;
  EXPECT_NEAR(s, 2.0, 1e-14);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  EXPECT_GT(r.nodes.front(), 0.0);
  EXPECT_LT(r.nodes.back(), 1.0);
}

TEST(GaussJacobi, MassIsBetaFunction) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.95, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double a = u(gen), b = u(gen);
    const JacobiRule r = gauss_jacobi(a, b, 1 + i % 20);
    double s = 0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s / beta_fn(b + 1, a + 1), 1.0, 1e-12) << a << " " << b;
  }
}

TEST(GaussJacobi, ExactOnPolynomialsOfDegreeTwoMMinusOne) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-0.9, 2.0), c(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = u(gen), b = u(gen);
    const int m = 2 + trial % 10;
    std::vector<double> coef(static_cast<std::size_t>(2 * m));
    for (auto& x : coef) x = c(gen);
    double exact = 0;
    for (std::size_t j = 0; j < coef.size(); ++j) exact += coef[j] * beta_fn(b + 1 + static_cast<double>(j), a + 1);
    const JacobiRule r = gauss_jacobi(a, b, m);
    double q = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      double p = 0;
      for (std::size_t j = coef.size(); j-- > 0;) p = p * r.nodes[i] + coef[j];
      q += r.weights[i] * p;
    }
    double scale = 0;
    for (std::size_t j = 0; j < coef.size(); ++j) scale += std::abs(coef[j]) * beta_fn(b + 1 + static_cast<double>(j), a + 1);
    EXPECT_LE(std::abs(q - exact), 1e-13 * scale) << a << " " << b << " " << m;
  }
}

TEST(GaussJacobi, DivergentWeight) {
  EXPECT_THROW(gauss_jacobi(-1.0, 0.0, 4), divergent_weight_error);
  EXPECT_THROW(gauss_jacobi(0.0, -1.2, 4), divergent_weight_error);
  EXPECT_THROW(integrate_interval([](double) { return 1.0; }, 0.0, 1.0, -1.0, 0.0, QuadratureSpec{}), divergent_weight_error);
}

TEST(IntegrateInterval, BetaIntegral) {
  const QuadResult r = integrate_interval([](double t) { return std::pow(t, 0.3) * std::pow(1 - t, 0.4); }, 0.0, 1.0, 0.3, 0.4, {});
  EXPECT_NEAR(r.value.real(), beta_fn(1.3, 1.4), 1e-12);
  EXPECT_LE(std::abs(r.value.real() - beta_fn(1.3, 1.4)), r.error + 1e-15);
  EXPECT_TRUE(r.converged);
}

TEST(IntegrateInterval, DixonKernel) {
  const double k = 0.7, x1 = 2.0, x2 = 0.5;
  const auto f = [&](double t) { return std::pow(x1 - t, k - 1) * std::pow(t - x2, k - 1); };
  const QuadResult r = integrate_interval(f, x2, x1, k - 1, k - 1, {});
  EXPECT_NEAR(r.value.real() / (beta_fn(k, k) * std::pow(x1 - x2, 2 * k - 1)), 1.0, 1e-10);
}

TEST(IntegrateInterval, LinearIsExactInOnePanel) {
  const QuadResult r = integrate_interval([](double t) { return 3.0 * t - 1.0; }, -1.0, 2.0, 0.0, 0.0, {});
  EXPECT_NEAR(r.value.real(), 1.5, 1e-14);
  EXPECT_EQ(r.evaluations, 36u);
}

TEST(IntegrateInterval, EmptyInterval) {
  const QuadResult r = integrate_interval([](double) { return 1.0; }, 0.5, 0.5, 0.0, 0.0, {});
  EXPECT_EQ(r.value, std::complex<double>{});
}

TEST(IntegrateInterval, ComplexExponent) {
  const std::complex<double> p{0.3, 0.2};
  const QuadResult r = integrate_interval([&](double t) { return std::pow(std::complex<double>(t), p); }, 0.0, 1.0, 0.3, 0.0, {});
  EXPECT_LE(std::abs(r.value - 1.0 / (1.0 + p)), r.error);
  EXPECT_LE(std::abs(r.value - 1.0 / (1.0 + p)), 1e-10);
}

TEST(IntegrateInterval, NonFiniteIntegrandNamed) {
  const auto f = [](double t) { return t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
  try {
    integrate_interval(f, 0.0, 1.0, 0.0, 0.0, QuadratureSpec{});
    FAIL();
  } catch (const accuracy_error& e) {
    EXPECT_NE(std::string(e.what()).find("not finite"), std::string::npos) << e.what();
  }
}

TEST(IntegrateInterval, UnresolvedInteriorSingularityThrows) {
  QuadratureSpec spec;
  spec.max_depth = 3;
  const auto f = [](double t) { return 1.0 / std::sqrt(std::abs(t - 1.0 / 3.0)); };
  try {
    integrate_interval(f, 0.0, 1.0, 0.0, 0.0, spec);
    FAIL();
  } catch (const accuracy_error& e) {
    EXPECT_GT(e.estimate, 0.0);
    EXPECT_NEAR(e.best_real, 2.0 * (std::sqrt(1.0 / 3.0) + std::sqrt(2.0 / 3.0)), 0.5);
  }
  const QuadResult r = integrate_interval(f, 0.0, 1.0, 0.0, 0.0, spec, false);
  EXPECT_FALSE(r.converged);
}

TEST(IntegrateInterval, ErrorEstimateIsConservative) {
  // Beta integrals (half with undeclared endpoint behaviour), the Dixon kernel, and the
  // Dixon-Anderson layer, each over random parameters
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ue(0.05, 2.0), uk(0.3, 1.5), ux(0.0, 3.0);
  QuadratureSpec spec;
  spec.rel_tol = 1e-8;
  spec.abs_tol = 1e-14;
  int within = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    double exact = 0;
    QuadResult r;
    if (i % 3 == 0) {
      const double a = ue(gen) - 0.9 * (i % 2), b = ue(gen);
      const bool declared = i % 2 == 1;
      const auto f = [&](double t) { return std::pow(t, a) * std::pow(1 - t, b); };
      r = integrate_interval(f, 0.0, 1.0, declared ? a : 0.0, declared ? b : 0.0, spec, false);
      exact = beta_fn(a + 1, b + 1);
    } else if (i % 3 == 1) {
      const double k = uk(gen), x2 = ux(gen), x1 = x2 + 0.1 + ux(gen);
      const auto f = [&](double t) { return std::pow(x1 - t, k - 1) * std::pow(t - x2, k - 1); };
      r = integrate_interval(f, x2, x1, k - 1, k - 1, spec, false);
      exact = beta_fn(k, k) * std::pow(x1 - x2, 2 * k - 1);
    } else {
      const double s1 = uk(gen), s2 = uk(gen), s3 = uk(gen);
      const double x3 = ux(gen), x2 = x3 + 0.2 + ux(gen), x1 = x2 + 0.2 + ux(gen);
      const DixonAnderson d{x1, x2, x3, s1, s2, s3};
      const auto f = [&](std::span<const double> y) {
        return std::abs(y[0] - y[1]) * std::pow(x1 - y[0], s1 - 1) * std::pow(y[0] - x2, s2 - 1) * std::pow(y[0] - x3, s3 - 1) *
               std::pow(x1 - y[1], s1 - 1) * std::pow(x2 - y[1], s2 - 1) * std::pow(y[1] - x3, s3 - 1);
      };
      r = integrate_nested(d, f, spec);
      exact = std::tgamma(s1) * std::tgamma(s2) * std::tgamma(s3) / std::tgamma(s1 + s2 + s3) * std::pow(x1 - x2, s1 + s2 - 1) *
              std::pow(x1 - x3, s1 + s3 - 1) * std::pow(x2 - x3, s2 + s3 - 1);
    }
    const double err = std::abs(r.value.real() - exact);
    if (err <= r.error) ++within;
    EXPECT_LE(err, 10.0 * r.error) << i;
  }
  EXPECT_GE(within, 95);
}

TEST(IntegrateInterval, RefinementLowersError) {
  const auto f = [](double t) { return std::pow(t, 0.35) * std::exp(-3 * t) / (1.2 - t); };
  double prev_err = 1e300;
  std::size_t prev_evals = 0;
  QuadResult ref = integrate_interval(f, 0.0, 1.0, 0.0, 0.0, QuadratureSpec{1e-15, 1e-14, 40, 12, 1, 2000}, false);
  for (double tol : {1e-4, 1e-7, 1e-10}) {
    QuadratureSpec spec;
    spec.rel_tol = tol;
    spec.abs_tol = 0;
    spec.max_panels = 2000;
    const QuadResult r = integrate_interval(f, 0.0, 1.0, 0.0, 0.0, spec);
    EXPECT_LE(r.error, prev_err);
    EXPECT_GE(r.evaluations, prev_evals);
    EXPECT_LE(std::abs(r.value - ref.value), tol * std::abs(ref.value) + ref.error);
    prev_err = r.error;
    prev_evals = r.evaluations;
  }
}

TEST(IntegrateInterval, DeterministicAndParallelConsistent) {
  const auto f = [](double t) { return std::pow(t, -0.4) * std::sin(7 * t); };
  const QuadResult a = integrate_interval(f, 0.0, 1.0, -0.4, 0.0, {});
  const QuadResult b = integrate_interval(f, 0.0, 1.0, -0.4, 0.0, {});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
  const QuadResult c = integrate_interval(f, 0.0, 1.0, -0.4, 0.0, {}, true, 4);
  EXPECT_LE(std::abs(a.value - c.value), a.error + c.error);
}

TEST(IntegrateNested, SimplexVolume) {
  const QuadResult r = integrate_nested(Simplex3{}, [](std::span<const double>) { return 1.0; }, {});
  EXPECT_NEAR(r.value.real(), 1.0 / 6.0, 1e-14);
}

TEST(IntegrateNested, InterlacingPolytopeAgainstMonteCarlo) {
  // volume and first moment of {0<a<1<b<2, a<c<b} against a Halton estimate on the unit cube
  const auto g = [](std::span<const double> x) { return x[2]; };
  const QuadResult vol = integrate_nested(Interlacing{}, [](std::span<const double>) { return 1.0; }, {});
  const QuadResult mom = integrate_nested(Interlacing{}, g, {});
  double mc_vol = 0, mc_mom = 0;
  const std::size_t N = 400000;
  for (std::size_t i = 1; i <= N; ++i) {
    const double a = halton(i, 2), b = 1 + halton(i, 3), c = 2 * halton(i, 5);
    if (a <= c && c <= b) {
      mc_vol += 2.0;
      mc_mom += 2.0 * c;
    }
  }
  mc_vol /= N;
  mc_mom /= N;
  EXPECT_NEAR(vol.value.real(), 1.0, 1e-13);
  EXPECT_NEAR(vol.value.real(), mc_vol, 1e-4);
  EXPECT_NEAR(mom.value.real(), mc_mom, 1e-4);
}

TEST(IntegrateNested, SeparableBetaBox) {
  const BetaBox box{-0.4, 0.7, 1.3, -0.2};
  const auto f = [&](std::span<const double> x) {
    return std::pow(x[0], box.a1) * std::pow(1 - x[0], box.b1) * std::pow(x[1], box.a2) * std::pow(1 - x[1], box.b2);
  };
  const QuadResult r = integrate_nested(box, f, {});
  const double exact = beta_fn(box.a1 + 1, box.b1 + 1) * beta_fn(box.a2 + 1, box.b2 + 1);
  EXPECT_NEAR(r.value.real() / exact, 1.0, 1e-10);
  EXPECT_LE(std::abs(r.value.real() - exact), r.error + 1e-14);
}

TEST(IntegrateNested, DixonAndersonIntegral) {
  const double s = 0.6;
  const DixonAnderson d{3.0, 1.5, 0.2, s, s, s};
  const double x[3] = {d.x1, d.x2, d.x3};
  const auto f = [&](std::span<const double> y) {
    double v = std::abs(y[0] - y[1]);
    for (double yi : {y[0], y[1]})
      for (double xj : x) v *= std::pow(std::abs(yi - xj), s - 1);
    return v;
  };
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  const QuadResult r = integrate_nested(d, f, spec);
  double exact = std::pow(std::tgamma(s), 3) / std::tgamma(3 * s);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) exact *= std::pow(x[i] - x[j], 2 * s - 1);
  EXPECT_NEAR(r.value.real() / exact, 1.0, 1e-9);
}

TEST(IntegrateNested, ParallelOuterLevel) {
  const DixonAnderson d{3.0, 1.5, 0.2, 0.6, 0.8, 0.45};
  const auto f = [&](std::span<const double> y) {
    return std::pow(d.x1 - y[0], -0.4) * std::pow(y[0] - d.x2, -0.2) * std::pow(d.x2 - y[1], -0.2) * std::pow(y[1] - d.x3, -0.55);
  };
  QuadratureSpec seq;
  QuadratureSpec par = seq;
  par.parallel = 3;
  const QuadResult a = integrate_nested(d, f, seq), b = integrate_nested(d, f, par);
  EXPECT_LE(std::abs(a.value - b.value), a.error + b.error + 1e-15);
}
