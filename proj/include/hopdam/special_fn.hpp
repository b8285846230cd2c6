#pragma once

// Complex log-gamma and the gamma-product closed forms: the leading coefficients a(w)
// of the two integral representations, the value at the identity of the asymptotic
// solution, and the Selberg-type right-hand side.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "hopdam/error.hpp"
#include "hopdam/root_data.hpp"

namespace hopdam {

namespace detail {

inline constexpr double kPi = std::numbers::pi;

// Godfrey's coefficients, g = 607/128.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr std::array<double, 15> kLanczosC = {
    0.99999999999999709182,   57.156235665862923517,    -59.597960355475491248,
    14.136097974741747174,    -0.49191381609762019978,  3.3994649984811888699e-5,
    4.6523628927048575665e-5, -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4, 2.1743961811521264320e-4, -1.6431810653676389022e-4,
    8.4418223983852743293e-5, -2.6190838401581408670e-5, 3.6899182659531622704e-6};

inline double principal_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline cplx lanczos_log_gamma(cplx z) {
  const cplx zm = z - 1.0;
  cplx series = kLanczosC[0];
  for (std::size_t i = 1; i < kLanczosC.size(); ++i) series += kLanczosC[i] / (zm + static_cast<double>(i));
  const cplx t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace detail

/// sin(pi z) with exact period reduction of the real part.
inline cplx sin_pi(cplx z) {
  const double x = std::remainder(z.real(), 2.0);
  const double y = z.imag();
  return {std::sin(detail::kPi * x) * std::cosh(detail::kPi * y), std::cos(detail::kPi * x) * std::sinh(detail::kPi * y)};
}

/// Principal log of sin(pi z); stable for large |Im z|.
inline cplx log_sin_pi(cplx z) {
  const double y = z.imag();
  if (std::abs(y) < 20.0) return std::log(sin_pi(z));
  // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i, keep the dominant exponential.
  const double x = std::remainder(z.real(), 2.0);
  const double s = y > 0 ? 1.0 : -1.0;
  const cplx dominant{detail::kPi * std::abs(y) - std::log(2.0), s * (detail::kPi / 2.0 - detail::kPi * x)};
  const cplx small = std::exp(cplx{-2.0 * detail::kPi * std::abs(y), 2.0 * s * detail::kPi * x});
  const cplx r = dominant + std::log(1.0 - small);
  return {r.real(), detail::principal_angle(r.imag())};
}

/// Principal branch of log Gamma(z); reflection for Re z < 1/2.
inline cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw pole_error(static_cast<long long>(z.real()));
  if (z.real() < 0.5) {
    // Branch term keeps the result continuous off the negative real axis (Hare 1997).
    const double branch = std::copysign(2.0 * detail::kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
    return cplx{std::log(detail::kPi), branch} - log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
  }
  return detail::lanczos_log_gamma(z);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

inline cplx beta(cplx a, cplx b) { return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b)); }

/// A closed-form value kept in log space until the last step.
struct ClosedFormValue {
  cplx value;
  double log_magnitude = 0.0;
  double phase = 0.0;  // in (-pi, pi]
  bool overflow = false;
  bool underflow = false;

  static ClosedFormValue from_log(cplx log_value) {
    ClosedFormValue v;
    v.log_magnitude = log_value.real();
    v.phase = detail::principal_angle(log_value.imag());
    v.overflow = v.log_magnitude > 709.0;
    v.underflow = v.log_magnitude < -745.0;
    if (!v.overflow) v.value = std::polar(std::exp(v.log_magnitude), v.phase);
    return v;
  }
};

enum class Representation { thm31, thm32 };

namespace detail {

inline constexpr double kGenericityGuard = 1e-8;

inline bool near_nonpositive_integer(cplx z) {
  const double m = std::round(z.real());
  return m <= 0.0 && std::abs(z - cplx{m, 0.0}) < kGenericityGuard;
}

inline bool near_integer(cplx z) {
  return std::abs(z - cplx{std::round(z.real()), 0.0}) < kGenericityGuard;
}

inline std::string describe_root(const PositiveRoot& a) {
  return "e_" + std::to_string(a.i + 1) + "-e_" + std::to_string(a.j + 1);
}

inline std::vector<int> root_vector(const RootSystem& R, const PositiveRoot& a) {
  std::vector<int> v(static_cast<std::size_t>(R.dim()), 0);
  v[static_cast<std::size_t>(a.i)] = 1;
  v[static_cast<std::size_t>(a.j)] = -1;
  return v;
}

/// log Gamma with the genericity guard; names the root that produced the argument.
inline cplx guarded_log_gamma(cplx z, const RootSystem& R, const PositiveRoot* root, const char* where) {
  if (near_nonpositive_integer(z)) {
    std::string what = std::string(where) + ": gamma argument " + std::to_string(z.real()) + "+" +
                       std::to_string(z.imag()) + "i is a pole";
    if (root) what += " (root " + describe_root(*root) + ")";
    throw degenerate_parameter_error(what, root ? root_vector(R, *root) : std::vector<int>{});
  }
  return log_gamma(z);
}

inline void check_rank(const RootSystem& R, const Weight& lambda) {
  if (static_cast<int>(lambda.size()) != R.dim()) throw dimension_mismatch_error(lambda.size(), static_cast<std::size_t>(R.dim()));
}

}  // namespace detail

/// Leading coefficient a(w) of the integral representation selected by `variant`.
inline ClosedFormValue a_coefficient(Representation variant, const WeylElement& w, const Weight& lambda, cplx k,
                                     const RootSystem& R) {
  using detail::kPi;
  detail::check_rank(R, lambda);
  const Weight wl = weyl_act(w, lambda);
  const Weight delta = weighted_half_sum(R, 1.0);
  const double npos = R.num_positive_roots();
  const double len = weyl_length(w);
  const cplx i{0.0, 1.0};

  cplx L = -2.0 * kPi * i * pairing(lambda, delta) + npos * std::log(cplx{0.0, 2.0});
  if (variant == Representation::thm31) {
    L += -kPi * i * (k - 1.0) * len;
    L += npos * detail::guarded_log_gamma(k, R, nullptr, "a_coefficient");
  } else {
    L += kPi * i * k * len;
    L += npos * detail::guarded_log_gamma(1.0 - k, R, nullptr, "a_coefficient");
  }
  for (const auto& a : R.positive_root_pairs()) {
    const cplx s = -pairing(wl, a);
    if (detail::near_integer(s))
      throw degenerate_parameter_error("a_coefficient: (w lambda, alpha) is an integer for root " + detail::describe_root(a),
                                       detail::root_vector(R, a));
    L += detail::guarded_log_gamma(s, R, &a, "a_coefficient") + log_sin_pi(s);
    const cplx den = variant == Representation::thm31 ? s + k : s - k + 1.0;
    L -= detail::guarded_log_gamma(den, R, &a, "a_coefficient");
  }
  return ClosedFormValue::from_log(L);
}

/// Value at z = 1 of the asymptotic solution with leading exponent mu + rho(k).
inline ClosedFormValue opdam_value(const Weight& mu, cplx k, const RootSystem& R) {
  detail::check_rank(R, mu);
  const Weight rho = weighted_half_sum(R, k);
  cplx L{};
  for (const auto& a : R.positive_root_pairs()) {
    const cplx m = pairing(mu, a);
    const cplx r = pairing(rho, a);
    L += detail::guarded_log_gamma(m + 1.0, R, &a, "opdam_value") - detail::guarded_log_gamma(m - k + 1.0, R, &a, "opdam_value");
    L -= detail::guarded_log_gamma(-r + 1.0, R, &a, "opdam_value") - detail::guarded_log_gamma(-r - k + 1.0, R, &a, "opdam_value");
  }
  return ClosedFormValue::from_log(L);
}

/// Closed-form right-hand side of the Selberg-type integral for cycle w.
inline ClosedFormValue selberg_rhs(const WeylElement& w, const Weight& lambda, cplx k, const RootSystem& R) {
  using detail::kPi;
  detail::check_rank(R, lambda);
  const Weight wl = weyl_act(w, lambda);
  const Weight delta = weighted_half_sum(R, 1.0);
  const Weight rho = weighted_half_sum(R, k);
  const double npos = R.num_positive_roots();
  const cplx i{0.0, 1.0};

  cplx L = npos * cplx{std::log(2.0 * kPi), kPi / 2.0};
  L += -2.0 * kPi * i * pairing(lambda, delta);
  L += kPi * i * k * static_cast<double>(weyl_length(w));
  L += npos * detail::guarded_log_gamma(1.0 - k, R, nullptr, "selberg_rhs");
  for (const auto& a : R.positive_root_pairs()) {
    const cplx m = pairing(wl, a);
    L -= detail::guarded_log_gamma(m - k + 1.0, R, &a, "selberg_rhs");
    L -= detail::guarded_log_gamma(-m - k + 1.0, R, &a, "selberg_rhs");
  }
  for (const auto& a : R.positive_root_pairs()) {
    const cplx r = pairing(rho, a);
    L += detail::guarded_log_gamma(-r - k + 1.0, R, &a, "selberg_rhs");
    L -= detail::guarded_log_gamma(-r + 1.0, R, &a, "selberg_rhs");
  }
  return ClosedFormValue::from_log(L);
}

}  // namespace hopdam
