#pragma once

// Pattern integrals: the integrands of the three integral formulas over the triangular
// pattern t_{ij} (row j holds t_{1j}..t_{jj}), the real identity-chamber cycle, and
// numerical checks of the eigenfunction property, leading exponents and the Selberg value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopdam/acceleration.hpp"
#include "hopdam/error.hpp"
#include "hopdam/hc_series.hpp"
#include "hopdam/parallel.hpp"
#include "hopdam/quadrature.hpp"
#include "hopdam/root_data.hpp"
#include "hopdam/special_fn.hpp"

namespace hopdam {

enum class Variant { thm31, thm32, thm41 };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::thm31: return "thm31";
    case Variant::thm32: return "thm32";
    case Variant::thm41: return "thm41";
  }
  return "?";
}

/// Number of pattern variables for rank n.
inline int pattern_size(int n) { return n * (n + 1) / 2; }

/// Flat index of t_{ij}, 1-based i <= j <= n.
inline int pattern_index(int i, int j) { return j * (j - 1) / 2 + i - 1; }

struct Pattern {
  int n = 0;
  std::vector<double> t;

  explicit Pattern(int rank = 0) : n(rank), t(static_cast<std::size_t>(pattern_size(rank))) {}
  double& operator()(int i, int j) { return t[static_cast<std::size_t>(pattern_index(i, j))]; }
  double operator()(int i, int j) const { return t[static_cast<std::size_t>(pattern_index(i, j))]; }
};

// Node numbering shared by domains and integrands: pattern variables first, then the
// constants 0 and 1, then the arguments z_1..z_{n+1}.
inline int zero_node(int n) { return pattern_size(n); }
inline int one_node(int n) { return pattern_size(n) + 1; }
inline int argument_node(int n, int i) { return pattern_size(n) + 1 + i; }  // 1-based i
inline int node_count(int n) { return pattern_size(n) + n + 3; }

/// Interlacing polytope with top row in [z_i, z_{i+1}] or in the ordered simplex of [0, 1].
class PatternDomain {
 public:
  PatternDomain(int n, bool unit_interval, std::vector<double> z) : n_(n), unit_(unit_interval), z_(std::move(z)) {
    const int N = pattern_size(n);
    lower_.assign(static_cast<std::size_t>(N), 0);
    upper_.assign(static_cast<std::size_t>(N), 0);
    if (unit_) {
      // t_{nn} in [0,1], then t_{in} in [0, t_{i+1,n}] downwards
      for (int i = n; i >= 1; --i) {
        const int v = pattern_index(i, n);
        order_.push_back(v);
        lower_[static_cast<std::size_t>(v)] = zero_node(n);
        upper_[static_cast<std::size_t>(v)] = i == n ? one_node(n) : pattern_index(i + 1, n);
      }
    } else {
      for (int i = 1; i <= n; ++i) {
        const int v = pattern_index(i, n);
        order_.push_back(v);
        lower_[static_cast<std::size_t>(v)] = argument_node(n, i);
        upper_[static_cast<std::size_t>(v)] = argument_node(n, i + 1);
      }
    }
    for (int j = n - 1; j >= 1; --j)
      for (int i = 1; i <= j; ++i) {
        const int v = pattern_index(i, j);
        order_.push_back(v);
        lower_[static_cast<std::size_t>(v)] = pattern_index(i, j + 1);
        upper_[static_cast<std::size_t>(v)] = pattern_index(i + 1, j + 1);
      }
    level_.assign(static_cast<std::size_t>(N), 0);
    for (std::size_t l = 0; l < order_.size(); ++l) level_[static_cast<std::size_t>(order_[l])] = static_cast<int>(l);
  }

  int rank() const { return n_; }
  bool unit_interval() const { return unit_; }
  const std::vector<double>& z() const { return z_; }
  std::string cycle_tag() const { return "identity-chamber"; }
  std::size_t dimension() const { return order_.size(); }

  int variable_at(std::size_t level) const { return order_[level]; }
  int level_of(int variable) const { return level_[static_cast<std::size_t>(variable)]; }
  int lower_node(int variable) const { return lower_[static_cast<std::size_t>(variable)]; }
  int upper_node(int variable) const { return upper_[static_cast<std::size_t>(variable)]; }

  /// Value of a node given pattern values in flat order.
  double node_value(int node, std::span<const double> t) const {
    const int N = pattern_size(n_);
    if (node < N) return t[static_cast<std::size_t>(node)];
    if (node == zero_node(n_)) return 0.0;
    if (node == one_node(n_)) return 1.0;
    return z_[static_cast<std::size_t>(node - one_node(n_) - 1)];
  }

  /// Interval of the variable at `level`; `outer` holds the values of levels 0..level-1.
  Slice slice(std::size_t level, std::span<const double> outer) const {
    const int v = order_[level];
    auto value = [&](int node) {
      if (node < pattern_size(n_)) return outer[static_cast<std::size_t>(level_of(node))];
      return node_value(node, {});
    };
    return {value(lower_node(v)), value(upper_node(v)), 0.0, 0.0};
  }

  bool contains(const Pattern& p) const {
    for (int v = 0; v < pattern_size(n_); ++v) {
      const double x = p.t[static_cast<std::size_t>(v)];
      if (x < node_value(lower_node(v), p.t) || x > node_value(upper_node(v), p.t)) return false;
    }
    return true;
  }

  /// Flat pattern from level-ordered coordinates.
  void to_pattern(std::span<const double> by_level, std::span<double> t) const {
    for (std::size_t l = 0; l < order_.size(); ++l) t[static_cast<std::size_t>(order_[l])] = by_level[l];
  }

 private:
  int n_;
  bool unit_;
  std::vector<double> z_;
  std::vector<int> order_;  // level -> variable
  std::vector<int> level_;  // variable -> level
  std::vector<int> lower_, upper_;
};

inline PatternDomain identity_cycle(Variant variant, std::span<const double> z, int n) {
  if (n < 1 || n > kMaxRank) throw invalid_rank_error(n);
  if (variant == Variant::thm41) return PatternDomain(n, true, {});
  if (static_cast<int>(z.size()) != n + 1) throw dimension_mismatch_error(z.size(), static_cast<std::size_t>(n + 1));
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0)) throw outside_chamber_error("identity_cycle: z must be positive");
    if (i > 0 && !(z[i] > z[i - 1])) throw outside_chamber_error("identity_cycle: z must be strictly increasing");
  }
  return PatternDomain(n, false, std::vector<double>(z.begin(), z.end()));
}

enum class FactorClass { argument_difference, row_to_row, same_row, power, unit_difference };

inline const char* to_string(FactorClass c) {
  switch (c) {
    case FactorClass::argument_difference: return "argument_difference";
    case FactorClass::row_to_row: return "row_to_row";
    case FactorClass::same_row: return "same_row";
    case FactorClass::power: return "power";
    case FactorClass::unit_difference: return "unit_difference";
  }
  return "?";
}

/// |node a - node b|^exponent.
struct Factor {
  FactorClass cls;
  int a;
  int b;
  cplx exponent;
};

struct IntegrandSpec {
  Variant variant = Variant::thm32;
  int n = 0;
  Weight lambda;
  cplx k;
  std::vector<double> z;
  std::vector<Factor> factors;
  cplx log_prefactor;  // log of the product in front of the integral

  double node_value(int node, std::span<const double> t) const {
    const int N = pattern_size(n);
    if (node < N) return t[static_cast<std::size_t>(node)];
    if (node == zero_node(n)) return 0.0;
    if (node == one_node(n)) return 1.0;
    return z[static_cast<std::size_t>(node - one_node(n) - 1)];
  }

  /// Exponent of the power factor of row j.
  cplx row_power(int j) const {
    const auto a = static_cast<std::size_t>(n - j + 1);  // lambda_{n-j+2} in 0-based storage
    const cplx diff = lambda[a] - lambda[a - 1];
    return variant == Variant::thm31 ? diff - k : diff + k - 1.0;
  }

  cplx log_integrand(std::span<const double> t) const {
    double re = 0.0, im = 0.0;
    for (const auto& f : factors) {
      const double lb = std::log(std::abs(node_value(f.a, t) - node_value(f.b, t)));
      re += f.exponent.real() * lb;
      im += f.exponent.imag() * lb;
    }
    return {re, im};
  }
  cplx operator()(std::span<const double> t) const { return std::exp(log_integrand(t)); }
  cplx operator()(const Pattern& p) const { return (*this)(std::span<const double>(p.t)); }
  cplx prefactor() const { return std::exp(log_prefactor); }

  std::map<FactorClass, int> class_counts() const {
    std::map<FactorClass, int> c;
    for (const auto& f : factors) ++c[f.cls];
    return c;
  }
};

/// Factor counts of the displayed products for rank n.
inline std::map<FactorClass, int> expected_class_counts(Variant variant, int n) {
  std::map<FactorClass, int> c;
  if (variant == Variant::thm41)
    c[FactorClass::unit_difference] = n;
  else
    c[FactorClass::argument_difference] = n * (n + 1);
  if (n >= 2) {
    c[FactorClass::row_to_row] = (n - 1) * n * (n + 1) / 3;
    if (n >= 2) c[FactorClass::same_row] = (n + 1) * n * (n - 1) / 6;
  }
  c[FactorClass::power] = pattern_size(n);
  return c;
}

struct ExponentAudit {
  bool counts_match = false;
  bool root_rule_match = false;   // exponents re-derived from simple roots attached to rows
  bool telescoping_match = false;  // sum_j j * (lambda_{n-j+2} - lambda_{n-j+1}) = -(n+1) lambda_1
  bool ok() const { return counts_match && root_rule_match && telescoping_match; }
};

/// Re-derives every exponent of the table from the rule that attaches the simple root
/// alpha_{n+1-j} to row j: powers (lambda - rho, -alpha(j)) - 1, differences
/// k (alpha(j), alpha(j')), top-row unit factors k ((n+1) Lambda_1, -alpha(n)).
/// Argument factors are the n+1 copies that merge into the unit factor at z = 1; the
/// first representation is audited with k replaced by 1 - k.
inline ExponentAudit audit_exponent_table(const IntegrandSpec& spec) {
  constexpr double tol = 1e-12;
  const int n = spec.n;
  ExponentAudit a;
  a.counts_match = spec.class_counts() == expected_class_counts(spec.variant, n);

  const RootSystem R = build_root_system(n);
  const auto& lam1 = R.fundamental_weights()[0];
  auto simple = [&](int j) { return PositiveRoot{row_root(j, n) - 1, row_root(j, n)}; };
  auto root_pair = [&](int j1, int j2) {
    const PositiveRoot x = simple(j1), y = simple(j2);
    return static_cast<double>((x.i == y.i) - (x.i == y.j) - (x.j == y.i) + (x.j == y.j));
  };
  auto row_of = [&](int v) {
    int j = 1;
    while (pattern_index(1, j + 1) <= v) ++j;
    return j;
  };
  // variant shifts relative to the root rule (which is written for thm41/thm32)
  const bool dual = spec.variant == Variant::thm31;
  const cplx kk = dual ? 1.0 - spec.k : spec.k;
  bool match = true;
  for (const auto& f : spec.factors) {
    cplx expect;
    switch (f.cls) {
      case FactorClass::power: {
        const int j = row_of(f.a);
        const PositiveRoot al = simple(j);
        const Weight rho_kk = weighted_half_sum(R, kk);
        expect = -pairing(spec.lambda - rho_kk, al) - 1.0;
        break;
      }
      case FactorClass::same_row:
      case FactorClass::row_to_row:
        expect = kk * root_pair(row_of(f.a), row_of(f.b));
        break;
      case FactorClass::unit_difference: {
        const PositiveRoot al = simple(n);
        const double pair = (lam1[static_cast<std::size_t>(al.i)] - lam1[static_cast<std::size_t>(al.j)]).to_double();
        expect = kk * static_cast<double>(n + 1) * -pair;
        break;
      }
      case FactorClass::argument_difference:
        // each z_i contributes one of the n+1 copies merged into the unit factor
        expect = -kk;
        break;
    }
    if (std::abs(expect - f.exponent) > tol) match = false;
  }
  a.root_rule_match = match;

  cplx tele{}, lam1v = spec.lambda[0];
  for (int j = 1; j <= n; ++j) {
    const auto idx = static_cast<std::size_t>(n - j + 1);
    tele += static_cast<double>(j) * (spec.lambda[idx] - spec.lambda[idx - 1]);
  }
  a.telescoping_match = std::abs(tele + static_cast<double>(n + 1) * lam1v) <= 1e-9 * (1.0 + std::abs(lam1v));
  return a;
}

/// Integrand of the selected formula, with the product in front of the integral.
inline IntegrandSpec build_integrand(Variant variant, const Weight& lambda, cplx k, std::span<const double> z,
                                     const RootSystem& R) {
  const int n = R.rank();
  if (static_cast<int>(lambda.size()) != n + 1) throw dimension_mismatch_error(lambda.size(), static_cast<std::size_t>(n + 1));
  if (std::abs(lambda.sum()) > 1e-9) throw error("build_integrand: lambda must have zero coordinate sum");
  IntegrandSpec s;
  s.variant = variant;
  s.n = n;
  s.lambda = lambda;
  s.k = k;
  if (variant != Variant::thm41) {
    if (static_cast<int>(z.size()) != n + 1) throw dimension_mismatch_error(z.size(), static_cast<std::size_t>(n + 1));
    s.z.assign(z.begin(), z.end());
  }
  const bool t31 = variant == Variant::thm31;
  const cplx e_cross = t31 ? k - 1.0 : -k;
  const cplx e_same = t31 ? 2.0 - 2.0 * k : 2.0 * k;

  auto require = [&](cplx e, const std::string& face) {
    if (!(e.real() > -1.0))
      throw divergent_weight_error("build_integrand: exponent " + std::to_string(e.real()) + " <= -1 on face " + face);
  };

  if (variant == Variant::thm41) {
    const cplx e = -static_cast<double>(n + 1) * k;
    require(e, "t_{i,n} = 1");
    for (int i = 1; i <= n; ++i) s.factors.push_back({FactorClass::unit_difference, pattern_index(i, n), one_node(n), e});
  } else {
    require(e_cross, "t_{i,n} = z_i");
    for (int i = 1; i <= n + 1; ++i)
      for (int i1 = 1; i1 <= n; ++i1)
        s.factors.push_back({FactorClass::argument_difference, argument_node(n, i), pattern_index(i1, n), e_cross});
  }
  if (n >= 2) {
    require(e_cross, "t_{ij} = t_{i,j+1}");
    require(e_same, "t_{i1,j} = t_{i2,j}");
  }
  for (int j = 1; j <= n - 1; ++j)
    for (int i = 1; i <= j; ++i)
      for (int i1 = 1; i1 <= j + 1; ++i1)
        s.factors.push_back({FactorClass::row_to_row, pattern_index(i, j), pattern_index(i1, j + 1), e_cross});
  for (int j = 2; j <= n; ++j)
    for (int i2 = 1; i2 <= j; ++i2)
      for (int i1 = i2 + 1; i1 <= j; ++i1)
        s.factors.push_back({FactorClass::same_row, pattern_index(i1, j), pattern_index(i2, j), e_same});
  for (int j = 1; j <= n; ++j) {
    const cplx p = s.row_power(j);
    require(p, "t_{i," + std::to_string(j) + "} = 0");
    for (int i = 1; i <= j; ++i) s.factors.push_back({FactorClass::power, pattern_index(i, j), zero_node(n), p});
  }

  if (variant != Variant::thm41) {
    const cplx zp = lambda[0] + k * static_cast<double>(n) / 2.0;
    for (double zi : s.z) s.log_prefactor += zp * std::log(zi);
    if (t31)
      for (std::size_t a = 0; a < s.z.size(); ++a)
        for (std::size_t b = a + 1; b < s.z.size(); ++b) s.log_prefactor += (1.0 - 2.0 * k) * std::log(std::abs(s.z[b] - s.z[a]));
  }

  const ExponentAudit audit = audit_exponent_table(s);
  if (!audit.ok()) throw error("build_integrand: exponent table audit failed");
  return s;
}

namespace detail {

/// Exponent of the integrated-out integrand at the face where variable v meets node `end`:
/// the subpattern squeezed onto that face scales homogeneously, so the exponent is the
/// number of squeezed variables plus every difference exponent inside the squeezed set.
inline double face_exponent(const PatternDomain& d, const IntegrandSpec& f, int v, int end) {
  const int N = pattern_size(d.rank());
  std::vector<char> in(static_cast<std::size_t>(node_count(d.rank())), 0);
  in[static_cast<std::size_t>(v)] = 1;
  in[static_cast<std::size_t>(end)] = 1;
  int squeezed = 0;
  for (std::size_t l = static_cast<std::size_t>(d.level_of(v)) + 1; l < d.dimension(); ++l) {
    const int w = d.variable_at(l);
    if (in[static_cast<std::size_t>(d.lower_node(w))] && in[static_cast<std::size_t>(d.upper_node(w))]) {
      in[static_cast<std::size_t>(w)] = 1;
      ++squeezed;
    }
  }
  double e = squeezed;
  for (const auto& fac : f.factors) {
    if (fac.a >= N && fac.b >= N) continue;
    if (in[static_cast<std::size_t>(fac.a)] && in[static_cast<std::size_t>(fac.b)]) e += fac.exponent.real();
  }
  return e;
}

/// A pattern domain together with the endpoint exponents of a given integrand.
struct WeightedPatternDomain {
  const PatternDomain* domain;
  std::vector<std::pair<double, double>> exponents;

  std::size_t dimension() const { return domain->dimension(); }
  Slice slice(std::size_t level, std::span<const double> outer) const {
    Slice s = domain->slice(level, outer);
    s.left_exp = exponents[level].first;
    s.right_exp = exponents[level].second;
    return s;
  }
};

}  // namespace detail

/// Iterated integral of the integrand (without its prefactor) over the domain.
inline QuadResult integrate_iterated(const IntegrandSpec& f, const PatternDomain& domain, const QuadratureSpec& spec) {
  if (domain.rank() != f.n) throw dimension_mismatch_error(static_cast<std::size_t>(domain.rank()), static_cast<std::size_t>(f.n));
  if (!domain.unit_interval()) {
    for (std::size_t i = 1; i < domain.z().size(); ++i)
      if (!(domain.z()[i] > domain.z()[i - 1])) throw empty_domain_error("integrate_iterated: top-row intervals are empty");
  }
  detail::WeightedPatternDomain wd{&domain, {}};
  for (std::size_t l = 0; l < domain.dimension(); ++l) {
    const int v = domain.variable_at(l);
    const double le = detail::face_exponent(domain, f, v, domain.lower_node(v));
    const double re = detail::face_exponent(domain, f, v, domain.upper_node(v));
    if (!(le > -1.0) || !(re > -1.0))
      throw divergent_weight_error("integrate_iterated: non-integrable face at level " + std::to_string(l));
    wd.exponents.emplace_back(le, re);
  }
  const std::size_t N = static_cast<std::size_t>(pattern_size(f.n));
  auto g = [&](std::span<const double> by_level) {
    double t[kMaxRank * (kMaxRank + 1) / 2];
    domain.to_pattern(by_level, std::span<double>(t, N));
    return f(std::span<const double>(t, N));
  };
  return integrate_nested(wd, g, spec);
}

/// Left-hand side of the Selberg-type integral over the identity-chamber cycle.
inline QuadResult selberg_lhs(const Weight& lambda, cplx k, int n, const QuadratureSpec& spec) {
  const RootSystem R = build_root_system(n);
  const IntegrandSpec f = build_integrand(Variant::thm41, lambda, k, {}, R);
  return integrate_iterated(f, identity_cycle(Variant::thm41, {}, n), spec);
}

/// Rank-1 factor C with selberg_lhs = C * selberg_rhs(e) on the identity-chamber cycle,
/// where a = lambda_1 - lambda_2.
inline cplx rank1_cycle_conversion(const Weight& lambda, cplx k) {
  const cplx a = lambda[0] - lambda[1];
  const cplx i{0.0, 1.0};
  return std::exp(i * std::numbers::pi * a) / (2.0 * i * sin_pi(k - a));
}

/// Prefactor times the integral of the second representation over the identity cycle.
inline QuadResult asymptotic_solution_numeric(const Weight& lambda, cplx k, std::span<const double> z, const QuadratureSpec& spec) {
  const int n = static_cast<int>(z.size()) - 1;
  const RootSystem R = build_root_system(n);
  const IntegrandSpec f = build_integrand(Variant::thm32, lambda, k, z, R);
  QuadResult r = integrate_iterated(f, identity_cycle(Variant::thm32, z, n), spec);
  const cplx pre = f.prefactor();
  r.value *= pre;
  r.error *= std::abs(pre);
  return r;
}

/// Total degree of z -> c z homogeneity of the prefactor times the integral.
inline cplx scaling_degree(const IntegrandSpec& f) {
  if (f.variant == Variant::thm41) throw error("scaling_degree: the Selberg integrand has no arguments");
  const int N = pattern_size(f.n);
  cplx d = static_cast<double>(N);
  for (const auto& fac : f.factors) d += fac.exponent;
  d += static_cast<double>(f.n + 1) * (f.lambda[0] + f.k * static_cast<double>(f.n) / 2.0);
  if (f.variant == Variant::thm31) d += static_cast<double>(f.n * (f.n + 1) / 2) * (1.0 - 2.0 * f.k);
  return d;
}

struct EigenResidual {
  double residual = 0.0;    // |L F - E F| / |F|
  double noise = 0.0;       // quadrature error propagated through the stencil, relative to |F|
  double truncation = 0.0;  // |L_h F - L_{h/2} F| / |F|
  bool inconclusive = false;
  cplx value;               // F(z0)
  cplx applied;             // L F
  cplx eigenvalue;
};

/// Applies the radial operator to F = asymptotic_solution_numeric by central differences in
/// log z, Richardson-combined over steps h and h/2. Flags the result inconclusive when the
/// propagated quadrature noise exceeds `resolution`.
inline EigenResidual eigen_residual(const Weight& lambda, cplx k, std::span<const double> z0, double h,
                                    const QuadratureSpec& spec, double resolution = 1e-3) {
  const int n = static_cast<int>(z0.size()) - 1;
  const RootSystem R = build_root_system(n);
  const std::size_t d = z0.size();
  for (std::size_t i = 0; i + 1 < d; ++i)
    if (!(std::log(z0[i + 1]) - std::log(z0[i]) >= 10.0 * h) || !(z0[i] > 0.0))
      throw outside_chamber_error("eigen_residual: base point needs log-spacing >= 10 h");

  // points: 0 centre, then for each coordinate i: +h, -h, +h/2, -h/2
  std::vector<std::vector<double>> pts(1 + 4 * d, std::vector<double>(z0.begin(), z0.end()));
  const double steps[4] = {h, -h, h / 2, -h / 2};
  for (std::size_t i = 0; i < d; ++i)
    for (int s = 0; s < 4; ++s) pts[1 + 4 * i + static_cast<std::size_t>(s)][i] = z0[i] * std::exp(steps[s]);

  QuadratureSpec inner = spec;
  inner.parallel = 1;
  std::vector<QuadResult> vals(pts.size());
  parallel_for(pts.size(), spec.parallel, [&](std::size_t p) { vals[p] = asymptotic_solution_numeric(lambda, k, pts[p], inner); });

  // coefficient vector of L_step F over the points
  auto op = [&](double step, int plus, int minus) {
    std::vector<cplx> c(pts.size());
    for (std::size_t i = 0; i < d; ++i) {
      c[1 + 4 * i + static_cast<std::size_t>(plus)] += 1.0 / (step * step);
      c[1 + 4 * i + static_cast<std::size_t>(minus)] += 1.0 / (step * step);
      c[0] -= 2.0 / (step * step);
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const double coth = (z0[j] + z0[i]) / (z0[j] - z0[i]);
        const cplx w = -k * coth / (2.0 * step);
        c[1 + 4 * i + static_cast<std::size_t>(plus)] += w;
        c[1 + 4 * i + static_cast<std::size_t>(minus)] -= w;
        c[1 + 4 * j + static_cast<std::size_t>(plus)] -= w;
        c[1 + 4 * j + static_cast<std::size_t>(minus)] += w;
      }
    return c;
  };
  const auto ch = op(h, 0, 1);
  const auto ch2 = op(h / 2, 2, 3);
  cplx Lh{}, Lh2{}, LF{};
  double noise = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    Lh += ch[p] * vals[p].value;
    Lh2 += ch2[p] * vals[p].value;
    const cplx c = (4.0 * ch2[p] - ch[p]) / 3.0;
    LF += c * vals[p].value;
    noise += std::abs(c) * vals[p].error;
  }
  EigenResidual r;
  r.value = vals[0].value;
  r.applied = LF;
  r.eigenvalue = eigenvalue(lambda, k, R);
  const double mag = std::abs(r.value);
  r.residual = std::abs(LF - r.eigenvalue * r.value) / mag;
  r.noise = noise / mag;
  r.truncation = std::abs(Lh - Lh2) / mag;
  r.inconclusive = r.noise > resolution;
  return r;
}

struct ExponentEstimate {
  double estimate = 0.0;  // extrapolated (exponent, c)
  double error = 0.0;
  bool inconclusive = false;
  std::vector<double> slopes;
};

/// Slope of log|F| against log s along z(s) = (s^{c_1} z0_1, ..., s^{c_{n+1}} z0_{n+1}),
/// s = 2^{-j}, extrapolated with the epsilon algorithm.
inline ExponentEstimate leading_exponent_numeric(const Weight& lambda, cplx k, std::span<const double> c, const QuadratureSpec& spec,
                                                 std::span<const double> z0 = {}, int samples = 11, double tolerance = 1e-4) {
  const std::size_t d = lambda.size();
  if (c.size() != d) throw dimension_mismatch_error(c.size(), d);
  std::vector<double> base(z0.begin(), z0.end());
  if (base.empty())
    for (std::size_t i = 0; i < d; ++i) base.push_back(static_cast<double>(i + 1));
  if (base.size() != d) throw dimension_mismatch_error(base.size(), d);

  std::vector<double> logs(static_cast<std::size_t>(samples));
  QuadratureSpec inner = spec;
  inner.parallel = 1;
  parallel_for(logs.size(), spec.parallel, [&](std::size_t j) {
    const double s = std::ldexp(1.0, -static_cast<int>(j));
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = base[i] * std::pow(s, c[i]);
    for (std::size_t i = 1; i < d; ++i)
      if (!(z[i] > z[i - 1])) throw outside_chamber_error("leading_exponent_numeric: direction leaves the chamber");
    logs[j] = std::log(std::abs(asymptotic_solution_numeric(lambda, k, z, inner).value));
  });
  ExponentEstimate out;
  std::vector<cplx> seq;
  for (std::size_t j = 0; j + 1 < logs.size(); ++j) {
    out.slopes.push_back((logs[j] - logs[j + 1]) / std::log(2.0));
    seq.emplace_back(out.slopes.back());
  }
  const Extrapolation e = wynn_epsilon(seq);
  out.estimate = e.value.real();
  out.error = e.error;
  out.inconclusive = !(e.error <= tolerance);
  return out;
}

}  // namespace hopdam
