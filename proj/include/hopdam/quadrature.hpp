#pragma once

// Gauss-Jacobi rules and adaptive integration of integrands with algebraic endpoint
// singularities, plus iterated integration over domains whose slices are intervals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "hopdam/error.hpp"
#include "hopdam/parallel.hpp"

namespace hopdam {

/// Nodes and weights for int_0^1 (1-t)^alpha t^beta f(t) dt.
struct JacobiRule {
  double alpha = 0.0;  // exponent at t = 1
  double beta = 0.0;   // exponent at t = 0
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

/// Implicit QL on a symmetric tridiagonal matrix, tracking only the first row of the
/// eigenvector matrix (Golub-Welsch). diag/offdiag are overwritten; offdiag[i] couples i, i+1.
inline void tridiagonal_eigen(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(d.size(), 0.0);
  e[static_cast<std::size_t>(n) - 1] = 0.0;
  z.assign(d.size(), 0.0);
  z[0] = 1.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw error("tridiagonal_eigen: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Golub-Welsch construction from the Jacobi three-term recurrence.
inline JacobiRule gauss_jacobi(double alpha, double beta, int m) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw divergent_weight_error("gauss_jacobi: weight exponents must exceed -1 (alpha=" + std::to_string(alpha) +
                                 ", beta=" + std::to_string(beta) + ")");
  if (m < 1) throw std::invalid_argument("gauss_jacobi: need at least one node");
  const double ab = alpha + beta;
  std::vector<double> diag(static_cast<std::size_t>(m)), off(static_cast<std::size_t>(m), 0.0), first;
  // recurrence on [-1, 1] for (1-x)^alpha (1+x)^beta
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int j = 1; j < m; ++j) {
    const double s = 2.0 * j + ab;
    diag[static_cast<std::size_t>(j)] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    double b2;
    if (j == 1)
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      b2 = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
    off[static_cast<std::size_t>(j) - 1] = std::sqrt(b2);
  }
  detail::tridiagonal_eigen(diag, off, first);
  // mass of the weight on [0, 1]
  const double mass = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  std::vector<std::size_t> order(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  JacobiRule rule{alpha, beta, {}, {}};
  for (std::size_t i : order) {
    rule.nodes.push_back(0.5 * (diag[i] + 1.0));
    rule.weights.push_back(mass * first[i] * first[i]);
  }
  return rule;
}

/// Process-wide cache; rules are immutable once built.
inline std::shared_ptr<const JacobiRule> cached_gauss_jacobi(double alpha, double beta, int m) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, int>, std::shared_ptr<const JacobiRule>> cache;
  const auto key = std::make_tuple(alpha, beta, m);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const JacobiRule>(gauss_jacobi(alpha, beta, m));
  cache.emplace(key, rule);
  return rule;
}

struct QuadratureSpec {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_depth = 30;
  int nodes = 12;        // nodes of the coarse rule on each panel; the fine rule uses twice as many
  int parallel = 1;      // worker threads for the outermost level of an iterated integral
  int max_panels = 400;  // per one-dimensional integral
};

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Integrand value plus the error already committed in computing it (inner integrals).
struct Estimate {
  std::complex<double> value;
  double error = 0.0;
};

namespace detail {

template <class F>
Estimate call_integrand(F& f, double x) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (std::is_same_v<R, Estimate>)
    return f(x);
  else
    return Estimate{std::complex<double>(f(x)), 0.0};
}

struct Panel {
  double a, b;
  bool left_weight, right_weight;
  int depth;
  std::complex<double> value;
  double error;
  bool refinable = true;
};

}  // namespace detail

/// Adaptive integral of f over [a, b] where f behaves like (t-a)^left_exp at a and
/// (b-t)^right_exp at b. Edge panels use Gauss-Jacobi rules for the declared behaviour,
/// interior panels Gauss-Legendre; each panel compares an m-node and a 2m-node rule.
/// Throws accuracy_error when `throw_on_failure` and the tolerance is not met.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b, double left_exp, double right_exp, const QuadratureSpec& spec,
                              bool throw_on_failure = true, int jobs = 1) {
  using C = std::complex<double>;
  if (!(left_exp > -1.0) || !(right_exp > -1.0))
    throw divergent_weight_error("integrate_interval: endpoint exponent <= -1");
  QuadResult res;
  if (a == b) return res;
  if (!(b > a)) throw std::invalid_argument("integrate_interval: need a < b");

  auto eval_panel = [&](detail::Panel& p) {
    const double le = p.left_weight ? left_exp : 0.0;
    const double re = p.right_weight ? right_exp : 0.0;
    const auto coarse = cached_gauss_jacobi(re, le, spec.nodes);
    const auto fine = cached_gauss_jacobi(re, le, 2 * spec.nodes);
    const double h = p.b - p.a;
    // edge panels start at the original endpoint, so the weight is u^le (1-u)^re in the
    // panel coordinate u and is divided out of f at the nodes
    auto weighted_sum = [&](const JacobiRule& rule, double* abs_sum, double* inner_err) {
      std::vector<Estimate> vals(rule.size());
      parallel_for(rule.size(), jobs, [&](std::size_t i) {
        const double u = rule.nodes[i];
        Estimate e = detail::call_integrand(f, p.a + h * u);
        double w = 1.0;
        if (le != 0.0) w *= std::pow(u, le);
        if (re != 0.0) w *= std::pow(1.0 - u, re);
        e.value /= w;
        e.error /= w;
        vals[i] = e;
      });
      C s{};
      for (std::size_t i = 0; i < vals.size(); ++i) {
        s += rule.weights[i] * vals[i].value;
        *abs_sum += rule.weights[i] * std::abs(vals[i].value);
        *inner_err += rule.weights[i] * vals[i].error;
      }
      res.evaluations += vals.size();
      return s * h;
    };
    double abs_c = 0, abs_f = 0, ie_c = 0, ie_f = 0;
    const C qc = weighted_sum(*coarse, &abs_c, &ie_c);
    const C qf = weighted_sum(*fine, &abs_f, &ie_f);
    p.value = qf;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * abs_f * h;
    p.error = std::max(std::abs(qf - qc), floor) + ie_f * h;
  };

  std::vector<detail::Panel> panels;
  panels.push_back({a, b, left_exp != 0.0, right_exp != 0.0, 0, {}, 0.0});
  eval_panel(panels.back());

  auto totals = [&] {
    C v{};
    double e = 0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::make_pair(v, e);
  };
  auto [total, err] = totals();
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    auto worst = panels.end();
    for (auto it = panels.begin(); it != panels.end(); ++it)
      if (it->refinable && (worst == panels.end() || it->error > worst->error)) worst = it;
    if (worst == panels.end() || static_cast<int>(panels.size()) >= spec.max_panels) break;
    if (worst->depth >= spec.max_depth) {
      worst->refinable = false;
      continue;
    }
    const detail::Panel p = *worst;
    const double mid = 0.5 * (p.a + p.b);
    detail::Panel left{p.a, mid, p.left_weight, false, p.depth + 1, {}, 0.0};
    detail::Panel right{mid, p.b, false, p.right_weight, p.depth + 1, {}, 0.0};
    eval_panel(left);
    eval_panel(right);
    *worst = left;
    panels.push_back(right);
    std::tie(total, err) = totals();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  std::tie(total, err) = totals();
  res.value = total;
  res.error = err;
  res.converged = err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  if (!res.converged && throw_on_failure) {
    if (!std::isfinite(err))
      throw accuracy_error("integrate_interval: integrand is not finite on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           total.real(), total.imag(), err);
    throw accuracy_error("integrate_interval: tolerance not met (estimate " + std::to_string(err) + ")", total.real(),
                         total.imag(), err);
  }
  return res;
}

/// One-dimensional slice of an iterated domain: the interval of the next variable given
/// the outer ones, with the algebraic exponents of the integrand at its ends.
struct Slice {
  double lo;
  double hi;
  double left_exp = 0.0;
  double right_exp = 0.0;
};

template <class D>
concept SliceDomain = requires(const D& d, std::size_t level, std::span<const double> outer) {
  { d.dimension() } -> std::convertible_to<std::size_t>;
  { d.slice(level, outer) } -> std::same_as<Slice>;
};

namespace detail {

template <SliceDomain D, class F>
Estimate nested_level(const D& domain, F& f, std::vector<double> x, std::size_t level, const QuadratureSpec& spec,
                      std::size_t* evals, int jobs) {
  if (level == domain.dimension()) {
    ++*evals;
    return {std::complex<double>(f(std::span<const double>(x))), 0.0};
  }
  const Slice s = domain.slice(level, std::span<const double>(x.data(), level));
  if (!(s.hi > s.lo)) return {};
  QuadratureSpec inner = spec;
  inner.rel_tol = spec.rel_tol * 0.25;
  std::size_t local = 0;
  auto g = [&](double t) {
    std::vector<double> y = x;
    y[level] = t;
    std::size_t e = 0;
    Estimate r = nested_level(domain, f, std::move(y), level + 1, inner, &e, 1);
    if (jobs <= 1) local += e;
    return r;
  };
  const QuadResult r = integrate_interval(g, s.lo, s.hi, s.left_exp, s.right_exp, spec, level == 0, jobs);
  *evals += jobs <= 1 ? local : r.evaluations;
  return {r.value, r.error};
}

}  // namespace detail

/// Iterated integral, outermost variable first. Inner integrals run with a tighter relative
/// tolerance and their error estimates are folded into the outer ones.
template <SliceDomain D, class F>
QuadResult integrate_nested(const D& domain, F&& f, const QuadratureSpec& spec) {
  if (domain.dimension() == 0) return {std::complex<double>(f(std::span<const double>{})), 0.0, 1, true};
  std::size_t evals = 0;
  const Estimate e = detail::nested_level(domain, f, std::vector<double>(domain.dimension()), 0, spec, &evals, spec.parallel);
  return {e.value, e.error, evals, true};
}

}  // namespace hopdam
