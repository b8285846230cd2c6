#pragma once

// Harish-Chandra series phi(lambda + rho(k), k, z) = z^{lambda+rho} sum_mu G_mu z^mu of the
// radial operator
//
//   L(k) = sum_i (z_i d/dz_i)^2 - k sum_{i<j} (z_j + z_i)/(z_j - z_i) (z_i d/dz_i - z_j d/dz_j)
//
// expanded in the chamber |z_1| < |z_2| < ... < |z_{n+1}|, where z^alpha is small for every
// positive root. mu runs over the cone spanned by the simple roots, truncated by height.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "hopdam/acceleration.hpp"
#include "hopdam/error.hpp"
#include "hopdam/root_data.hpp"

namespace hopdam {

/// Extended-precision scalar for stored series coefficients.
using xcplx = std::complex<long double>;

inline xcplx extend(cplx c) { return {c.real(), c.imag()}; }
inline cplx round_to_double(xcplx c) { return {static_cast<double>(c.real()), static_cast<double>(c.imag())}; }

/// mu = sum_i m[i] alpha_i over the simple roots.
struct MultiIndex {
  std::vector<int> m;

  int height() const {
    int h = 0;
    for (int v : m) h += v;
    return h;
  }
  bool nonnegative() const {
    return std::all_of(m.begin(), m.end(), [](int v) { return v >= 0; });
  }
  /// Ambient coordinates of mu in the e-basis.
  std::vector<int> ambient() const {
    std::vector<int> a(m.size() + 1, 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[i] += m[i];
      a[i + 1] -= m[i];
    }
    return a;
  }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Ranks compositions of h into `parts` nonnegative integers, lexicographic in the leading
/// parts. Every shell {height == h} is stored contiguously in this order.
class ShellIndexer {
 public:
  ShellIndexer() = default;
  ShellIndexer(int parts, int max_height) : parts_(parts), max_height_(max_height) {
    count_.assign(static_cast<std::size_t>(parts) + 2, std::vector<std::uint64_t>(static_cast<std::size_t>(max_height) + 1, 0));
    count_[0][0] = 1;
    for (std::size_t p = 1; p <= static_cast<std::size_t>(parts) + 1; ++p)
      for (std::size_t h = 0; h <= static_cast<std::size_t>(max_height); ++h) {
        const std::uint64_t a = count_[p - 1][h];
        const std::uint64_t b = h ? count_[p][h - 1] : 0;
        count_[p][h] = a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
      }
  }

  int parts() const { return parts_; }
  int max_height() const { return max_height_; }
  std::size_t shell_size(int h) const { return count(h, parts_); }

  std::size_t rank(std::span<const int> m) const {
    int h = 0;
    for (int v : m) h += v;
    std::size_t r = 0;
    // sum_{j < m_i} count(h - j, rest) telescopes through count(h, p+1) = sum_{h' <= h} count(h', p)
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      const int rest = static_cast<int>(m.size() - i - 1);
      r += count(h, rest + 1) - count(h - m[i], rest + 1);
      h -= m[i];
    }
    return r;
  }

  /// Visits the compositions of h in rank order.
  template <class F>
  void for_each_in_shell(int h, F&& f) const {
    std::vector<int> m(static_cast<std::size_t>(parts_), 0);
    m.back() = h;
    std::size_t pos = 0;
    while (true) {
      f(std::as_const(m), pos++);
      if (!next(m)) break;
    }
  }

 private:
  std::size_t count(int h, int p) const {
    if (h < 0) return 0;
    return static_cast<std::size_t>(count_[static_cast<std::size_t>(p)][static_cast<std::size_t>(h)]);
  }

  static bool next(std::vector<int>& m) {
    const std::size_t n = m.size();
    if (n < 2) return false;
    int tail = m[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      if (tail > 0) {
        ++m[i];
        for (std::size_t q = i + 1; q + 1 < n; ++q) m[q] = 0;
        m[n - 1] = tail - 1;
        return true;
      }
      tail += m[i];
    }
    return false;
  }

  int parts_ = 0;
  int max_height_ = 0;
  std::vector<std::vector<std::uint64_t>> count_;
};

/// Truncated series: coefficients for every mu of height <= order, stored in extended
/// precision; the accessors that return cplx round to double.
class FormalSeries {
 public:
  FormalSeries() = default;
  FormalSeries(int rank, int order) : rank_(rank), order_(order), index_(rank, order) {
    shells_.resize(static_cast<std::size_t>(order) + 1);
    for (int h = 0; h <= order; ++h) shells_[static_cast<std::size_t>(h)].assign(index_.shell_size(h), xcplx{});
  }

  int rank() const { return rank_; }
  int order() const { return order_; }
  const ShellIndexer& indexer() const { return index_; }

  std::span<xcplx> shell(int h) { return shells_[static_cast<std::size_t>(h)]; }
  std::span<const xcplx> shell(int h) const { return shells_[static_cast<std::size_t>(h)]; }

  /// Zero outside the stored cone.
  cplx coeff(std::span<const int> m) const { return round_to_double(coeff_ext(m)); }
  xcplx coeff_ext(std::span<const int> m) const {
    int h = 0;
    for (int v : m) {
      if (v < 0) return {};
      h += v;
    }
    if (h > order_) return {};
    return shells_[static_cast<std::size_t>(h)][index_.rank(m)];
  }
  cplx coeff(const MultiIndex& mu) const { return coeff(std::span<const int>(mu.m)); }
  xcplx& at(std::span<const int> m) {
    int h = 0;
    for (int v : m) h += v;
    return shells_.at(static_cast<std::size_t>(h)).at(index_.rank(m));
  }
  xcplx& at(const MultiIndex& mu) { return at(std::span<const int>(mu.m)); }

  /// f(const std::vector<int>& m, cplx value) over all stored indices by increasing height.
  template <class F>
  void for_each(F&& f) const {
    for_each_ext([&](const std::vector<int>& m, xcplx c) { f(m, round_to_double(c)); });
  }
  template <class F>
  void for_each_ext(F&& f) const {
    for (int h = 0; h <= order_; ++h)
      index_.for_each_in_shell(h, [&](const std::vector<int>& m, std::size_t pos) { f(m, shells_[static_cast<std::size_t>(h)][pos]); });
  }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& sh : shells_) s += sh.size();
    return s;
  }

  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) {
    a.check_shape(b);
    for (std::size_t h = 0; h < a.shells_.size(); ++h)
      for (std::size_t i = 0; i < a.shells_[h].size(); ++i) a.shells_[h][i] += b.shells_[h][i];
    return a;
  }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a + xcplx{-1.0L} * b; }
  friend FormalSeries operator*(cplx s, FormalSeries a) { return extend(s) * std::move(a); }
  friend FormalSeries operator*(xcplx s, FormalSeries a) {
    for (auto& sh : a.shells_)
      for (auto& c : sh) c *= s;
    return a;
  }

  /// Largest |coefficient| in shell h.
  double shell_max(int h) const {
    double m = 0.0;
    for (xcplx c : shell(h)) m = std::max(m, static_cast<double>(std::abs(c)));
    return m;
  }

  // Diagnostics of the recursion that produced this series.
  double min_denominator = std::numeric_limits<double>::infinity();
  std::vector<int> argmin_denominator;

 private:
  void check_shape(const FormalSeries& b) const {
    if (rank_ != b.rank_ || order_ != b.order_) throw std::invalid_argument("FormalSeries: shape mismatch");
  }

  int rank_ = 0;
  int order_ = 0;
  ShellIndexer index_;
  std::vector<std::vector<xcplx>> shells_;
};

struct RadialOperatorParams {
  cplx k;
  int n;
};

/// (lambda, lambda) - (rho(k), rho(k)).
inline cplx eigenvalue(const Weight& lambda, cplx k, const RootSystem& R) {
  const Weight rho = weighted_half_sum(R, k);
  return pairing(lambda, lambda) - pairing(rho, rho);
}

namespace detail {

inline constexpr double kResonanceGuard = 1e-10;

inline cplx ambient_pairing(std::span<const int> mu_ambient, const Weight& v) {
  cplx s{};
  for (std::size_t i = 0; i < mu_ambient.size(); ++i) s += static_cast<double>(mu_ambient[i]) * v[i];
  return s;
}

/// Solves the coefficient recursion shell by shell in arithmetic of type Real and hands every
/// finished shell to `sink` as sink(h, coefficients, indexer). Only the last n+1 shells are kept in memory; sums
/// over m >= 1 along each root direction are carried as running totals
///   A_a(mu) = sum_{m>=1} G_{mu-m a},  B_a(mu) = sum_{m>=1} m G_{mu-m a}.
template <class Real, class Sink>
void solve_hc_shells(const Weight& lambda, cplx k, int order, const RootSystem& R, Sink&& sink, double* min_den = nullptr,
                     std::vector<int>* argmin = nullptr) {
  using C = std::complex<Real>;
  const int n = R.rank();
  if (static_cast<int>(lambda.size()) != R.dim()) throw dimension_mismatch_error(lambda.size(), static_cast<std::size_t>(R.dim()));
  if (order < 0) throw std::invalid_argument("truncation order must be nonnegative");
  const ShellIndexer index(n, order);
  // lambda and lambda + rho(k), rho(k)_i = k (n/2 - i), formed in the working precision
  const C kk{k.real(), k.imag()};
  std::vector<C> lam(lambda.size()), shifted(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    lam[i] = C{lambda[i].real(), lambda[i].imag()};
    shifted[i] = lam[i] + kk * (static_cast<Real>(n) / 2 - static_cast<Real>(i));
  }
  const auto& roots = R.positive_root_pairs();
  const std::size_t nr = roots.size();
  std::vector<std::vector<int>> dirs;
  std::vector<int> dir_height;
  for (std::size_t r = 0; r < nr; ++r) {
    dirs.push_back(R.simple_coordinates(r));
    dir_height.push_back(roots[r].height());
  }

  struct Shell {
    std::vector<C> g;
    std::vector<std::vector<C>> a, b;  // per root
  };
  const std::size_t ring = static_cast<std::size_t>(n) + 1;
  std::vector<Shell> shells(ring);

  std::vector<int> prev(static_cast<std::size_t>(n));
  std::vector<int> amb(static_cast<std::size_t>(n) + 1);
  for (int h = 0; h <= order; ++h) {
    if (index.shell_size(h) > (std::size_t{1} << 31)) throw std::length_error("solve_hc_shells: truncation order too large for this rank");
    Shell& cur = shells[static_cast<std::size_t>(h) % ring];
    const std::size_t size = index.shell_size(h);
    cur.g.assign(size, C{});
    cur.a.assign(nr, std::vector<C>(size));
    cur.b.assign(nr, std::vector<C>(size));
    index.for_each_in_shell(h, [&](const std::vector<int>& m, std::size_t pos) {
      if (h == 0) {
        cur.g[pos] = 1.0;
        return;
      }
      std::fill(amb.begin(), amb.end(), 0);
      for (std::size_t i = 0; i < m.size(); ++i) {
        amb[i] += m[i];
        amb[i + 1] -= m[i];
      }
      C rhs{};
      for (std::size_t r = 0; r < nr; ++r) {
        bool inside = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
          prev[i] = m[i] - dirs[r][i];
          inside = inside && prev[i] >= 0;
        }
        C A{}, B{};
        if (inside) {
          const Shell& p = shells[static_cast<std::size_t>(h - dir_height[r]) % ring];
          const std::size_t q = index.rank(prev);
          A = p.g[q] + p.a[r][q];
          B = A + p.b[r][q];
        }
        cur.a[r][pos] = A;
        cur.b[r][pos] = B;
        const auto i = static_cast<std::size_t>(roots[r].i), j = static_cast<std::size_t>(roots[r].j);
        const C c = shifted[i] - shifted[j] + static_cast<Real>(amb[i] - amb[j]);
        rhs += c * A - static_cast<Real>(2) * B;
      }
      // (mu, mu + 2 lambda)
      C den{};
      for (std::size_t i = 0; i < amb.size(); ++i) den += static_cast<Real>(amb[i]) * (static_cast<Real>(amb[i]) + static_cast<Real>(2) * lam[i]);
      const double mag = static_cast<double>(std::abs(den));
      if (min_den && mag < *min_den) {
        *min_den = mag;
        if (argmin) *argmin = m;
      }
      if (mag < kResonanceGuard) throw resonance_error(m, mag);
      cur.g[pos] = static_cast<Real>(2) * kk * rhs / den;
    });
    sink(h, std::span<const C>(cur.g), index);
  }
}

}  // namespace detail

/// Coefficients G_mu of phi(lambda + rho(k), k, z), normalized by G_0 = 1, solved from
///   (mu, mu + 2 lambda) G_mu = 2k sum_{a>0} sum_{m>=1} (lambda + rho + mu - m a, a) G_{mu - m a}.
inline FormalSeries hc_coefficients(const Weight& lambda, cplx k, int order, const RootSystem& R) {
  FormalSeries s(R.rank(), order);
  detail::solve_hc_shells<long double>(
      lambda, k, order, R,
      [&](int h, std::span<const xcplx> g, const ShellIndexer&) { std::copy(g.begin(), g.end(), s.shell(h).begin()); },
      &s.min_denominator, &s.argmin_denominator);
  return s;
}

/// Image of z^{lambda+rho} * s under L(k), re-expanded in the chamber, truncated at the order of s,
/// with z^{lambda+rho} stripped. Each monomial z^nu is pushed forward term by term:
///   L z^nu = ((nu,nu) - 2(nu,rho)) z^nu - 2k sum_{a>0} (nu,a) sum_{m>=1} z^{nu + m a}.
inline FormalSeries apply_radial_operator(const FormalSeries& s, const Weight& lambda, const RadialOperatorParams& params) {
  const RootSystem R = build_root_system(params.n);
  if (s.rank() != params.n) throw std::invalid_argument("apply_radial_operator: series rank differs from operator rank");
  const Weight rho = weighted_half_sum(R, params.k);
  const Weight base = lambda + rho;
  FormalSeries out(s.rank(), s.order());
  const auto& roots = R.positive_root_pairs();
  std::vector<int> target;
  const xcplx k = extend(params.k);
  s.for_each_ext([&](const std::vector<int>& m, xcplx c) {
    if (c == xcplx{}) return;
    const MultiIndex mu{m};
    const auto amb = mu.ambient();
    std::vector<xcplx> nu(amb.size());
    xcplx diag{};
    for (std::size_t i = 0; i < amb.size(); ++i) {
      nu[i] = extend(base[i]) + static_cast<long double>(amb[i]);
      diag += nu[i] * (nu[i] - 2.0L * extend(rho[i]));
    }
    out.at(std::span<const int>(m)) += c * diag;
    const int h = mu.height();
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const auto d = R.simple_coordinates(r);
      const xcplx w = -2.0L * k * (nu[static_cast<std::size_t>(roots[r].i)] - nu[static_cast<std::size_t>(roots[r].j)]) * c;
      target = m;
      for (int step = 1; h + step * roots[r].height() <= s.order(); ++step) {
        for (std::size_t i = 0; i < target.size(); ++i) target[i] += d[i];
        out.at(std::span<const int>(target)) += w;
      }
    }
  });
  return out;
}

struct TransformedSeries {
  FormalSeries series;       // normalized so that the mu = 0 coefficient is 1
  Weight leading_exponent;   // lambda + rho(1 - k)
  cplx discarded_constant;   // prod_{i<j} (-1)^{2k-1} with (-1)^c = e^{i pi c}
};

/// Multiplies z^{lambda+rho(k)} s by prod_{i<j} (z_i - z_j)^{2k-1} prod_i z_i^{(1-2k)n/2}.
/// In the chamber the monomial part is z^{-(2k-1) delta}, absorbed into the leading exponent,
/// and prod_{i<j} (1 - z_i/z_j)^{2k-1} is expanded by the binomial series.
inline TransformedSeries transformation_image(const FormalSeries& s, cplx k, const Weight& lambda, int order, const RootSystem& R) {
  if (s.rank() != R.rank()) throw std::invalid_argument("transformation_image: rank mismatch");
  const int N = std::min(order, s.order());
  FormalSeries cur(R.rank(), N);
  s.for_each_ext([&](const std::vector<int>& m, xcplx c) {
    int h = 0;
    for (int v : m) h += v;
    if (h <= N) cur.at(std::span<const int>(m)) = c;
  });
  const cplx exponent = 2.0 * k - 1.0;
  const xcplx e = 2.0L * extend(k) - 1.0L;
  std::vector<xcplx> binom{1.0L};
  for (int m = 1; m <= N; ++m) binom.push_back(-binom.back() * (e - static_cast<long double>(m - 1)) / static_cast<long double>(m));
  for (std::size_t r = 0; r < R.positive_root_pairs().size(); ++r) {
    const auto d = R.simple_coordinates(r);
    const int ht = R.positive_root_pairs()[r].height();
    FormalSeries next(R.rank(), N);
    std::vector<int> src;
    cur.for_each_ext([&](const std::vector<int>& m, xcplx) {
      const int h = MultiIndex{m}.height();
      xcplx acc{};
      src = m;
      for (int step = 0; step * ht <= h; ++step) {
        if (step > 0)
          for (std::size_t i = 0; i < src.size(); ++i) src[i] -= d[i];
        acc += binom[static_cast<std::size_t>(step)] * cur.coeff_ext(std::span<const int>(src));
      }
      next.at(std::span<const int>(m)) = acc;
    });
    cur = std::move(next);
  }
  const xcplx c0 = cur.shell(0)[0];
  if (c0 != xcplx{1.0L, 0.0L}) cur = (1.0L / c0) * cur;
  const double npos = R.num_positive_roots();
  return {std::move(cur), lambda + weighted_half_sum(R, 1.0 - k),
          round_to_double(c0) * std::exp(cplx{0.0, std::numbers::pi} * exponent * npos)};
}

namespace detail {

inline void check_chamber(std::span<const cplx> z) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == cplx{}) throw outside_chamber_error("evaluate_phi: z_" + std::to_string(i + 1) + " = 0");
    if (i + 1 < z.size() && !(std::abs(z[i]) < std::abs(z[i + 1])))
      throw outside_chamber_error("evaluate_phi: need |z_1| < |z_2| < ... < |z_{n+1}| (violated at " + std::to_string(i + 1) + ")");
  }
}

inline cplx leading_monomial(std::span<const cplx> z, const Weight& exponent) {
  cplx L{};
  for (std::size_t i = 0; i < z.size(); ++i) L += exponent[i] * std::log(z[i]);
  return std::exp(L);
}

}  // namespace detail

/// z^{lambda+rho} sum_{height <= order} G_mu z^mu for precomputed coefficients.
inline cplx evaluate_phi(const FormalSeries& s, const Weight& lambda, cplx k, std::span<const cplx> z, const RootSystem& R) {
  if (static_cast<int>(z.size()) != R.dim()) throw dimension_mismatch_error(z.size(), static_cast<std::size_t>(R.dim()));
  detail::check_chamber(z);
  const int n = R.rank();
  // powers of the simple-root ratios z_i / z_{i+1}
  std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const cplx r = z[static_cast<std::size_t>(i)] / z[static_cast<std::size_t>(i) + 1];
    auto& p = pw[static_cast<std::size_t>(i)];
    p.resize(static_cast<std::size_t>(s.order()) + 1);
    p[0] = 1.0;
    for (std::size_t e = 1; e < p.size(); ++e) p[e] = p[e - 1] * r;
  }
  cplx sum{};
  s.for_each([&](const std::vector<int>& m, cplx c) {
    cplx t = c;
    for (std::size_t i = 0; i < m.size(); ++i) t *= pw[i][static_cast<std::size_t>(m[i])];
    sum += t;
  });
  return detail::leading_monomial(z, lambda + weighted_half_sum(R, k)) * sum;
}

inline cplx evaluate_phi(const Weight& lambda, cplx k, std::span<const cplx> z, int order, const RootSystem& R) {
  if (static_cast<int>(z.size()) != R.dim()) throw dimension_mismatch_error(z.size(), static_cast<std::size_t>(R.dim()));
  detail::check_chamber(z);
  return evaluate_phi(hc_coefficients(lambda, k, order, R), lambda, k, z, R);
}

struct LimitOptions {
  Acceleration acceleration = Acceleration::richardson;
  // path z(s) = (s^n, s^{n-1}, ..., 1), s_j = 1 - eps0 * ratio^j for j = first..last
  double eps0 = 1.0;
  double ratio = 0.5;
  int first = 1;
  int last = 12;
  int order = 0;               // 0: chosen so that the series tail at the last s is below 1e-17
  double tolerance = 1e-6;     // converged iff the extrapolation error estimate is below this
  bool throw_on_failure = false;  // throw convergence_error instead of returning converged = false

  /// Defaults per rank: halving steps at rank 1; ratio 2^{-1/2} at rank 2 to keep the
  /// (quadratic in order) series cost bounded.
  static LimitOptions for_rank(int n) {
    LimitOptions o;
    if (n >= 2) {
      o.acceleration = Acceleration::epsilon;
      o.ratio = std::sqrt(0.5);
      o.first = 2;
      o.last = n == 2 ? 14 : 8;
      o.tolerance = 1e-4;
    }
    return o;
  }
};

struct LimitResult {
  cplx value;
  double error = std::numeric_limits<double>::infinity();
  bool converged = false;
  int order = 0;
  std::vector<double> eps;
  std::vector<cplx> path_values;
};

/// Exponents of 1 - s in the expansion of phi(z(s)) near s = 1, used by Richardson mode.
/// The local exponents at the identity are those of the isotypic components of the
/// coinvariant algebra: 0 (trivial); 1-2k at rank 1; 1-3k, 2-3k, 3-6k at rank 2; each
/// followed by integer shifts.
inline std::vector<double> identity_local_exponents(int n, double k, std::size_t count) {
  std::vector<double> base{0.0};
  if (n == 1) base.push_back(1.0 - 2.0 * k);
  if (n == 2) {
    base.push_back(1.0 - 3.0 * k);
    base.push_back(3.0 - 6.0 * k);
  }
  std::vector<double> out;
  for (int shift = 0; out.size() < 4 * count + 8; ++shift)
    for (double b : base)
      if (b + shift > 0) out.push_back(b + shift);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), out.end());
  out.resize(std::min(out.size(), count));
  return out;
}

/// lim_{z -> 1} phi(lambda + rho(k), k, z) along z(s) = (s^n, ..., s, 1), s -> 1^-.
inline LimitResult evaluate_at_one(const Weight& lambda, cplx k, const RootSystem& R, const LimitOptions& opt = LimitOptions{}) {
  const int n = R.rank();
  LimitResult res;
  for (int j = opt.first; j <= opt.last; ++j) res.eps.push_back(opt.eps0 * std::pow(opt.ratio, j));
  const double eps_min = res.eps.back();
  res.order = opt.order > 0 ? opt.order : static_cast<int>(std::ceil(40.0 / eps_min));

  // On the path every simple-root ratio equals s, so only shell sums are needed.
  std::vector<cplx> shell_sum(static_cast<std::size_t>(res.order) + 1);
  detail::solve_hc_shells<double>(lambda, k, res.order, R, [&](int h, std::span<const cplx> g, const ShellIndexer&) {
    cplx t{};
    for (cplx c : g) t += c;
    shell_sum[static_cast<std::size_t>(h)] = t;
  });

  const Weight exponent = lambda + weighted_half_sum(R, k);
  cplx path_degree{};  // z(s)^{lambda+rho} = s^{path_degree}
  for (int i = 0; i <= n; ++i) path_degree += static_cast<double>(n - i) * exponent[static_cast<std::size_t>(i)];

  for (double e : res.eps) {
    const double s = 1.0 - e;
    cplx acc{};
    for (std::size_t h = shell_sum.size(); h-- > 0;) acc = acc * s + shell_sum[h];
    res.path_values.push_back(std::exp(path_degree * std::log(s)) * acc);
  }

  switch (opt.acceleration) {
    case Acceleration::none:
      res.value = res.path_values.back();
      res.error = res.path_values.size() > 1 ? std::abs(res.path_values.back() - res.path_values[res.path_values.size() - 2]) : std::abs(res.value);
      break;
    case Acceleration::epsilon: {
      const auto x = wynn_epsilon(res.path_values);
      res.value = x.value;
      res.error = x.error;
      break;
    }
    case Acceleration::richardson: {
      if (n > 2 || std::abs(k.imag()) > 0.0) throw std::invalid_argument("richardson limit needs rank <= 2 and real k");
      const auto ex = identity_local_exponents(n, k.real(), std::min<std::size_t>(res.eps.size() - 1, 8));
      const auto x = richardson(res.eps, res.path_values, ex);
      res.value = x.value;
      res.error = x.error;
      break;
    }
  }
  res.converged = res.error <= opt.tolerance;
  if (!res.converged && opt.throw_on_failure)
    throw convergence_error("evaluate_at_one: extrapolation estimate above tolerance", res.error);
  return res;
}

}  // namespace hopdam
