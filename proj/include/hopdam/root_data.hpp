#pragma once

// Root and weight data of type A_n realized in R^{n+1} with basis e_1..e_{n+1},
// and its Weyl group S_{n+1} acting by coordinate permutation.

#include <algorithm>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopdam/error.hpp"
#include "hopdam/rational.hpp"

namespace hopdam {

using cplx = std::complex<double>;

inline constexpr int kMaxRank = 8;

/// Coordinate vector of length n+1 in the e-basis (spectral parameters, rho, delta, exponents).
struct Weight {
  std::vector<cplx> coords;

  Weight() = default;
  explicit Weight(std::size_t dim) : coords(dim) {}
  explicit Weight(std::vector<cplx> c) : coords(std::move(c)) {}
  static Weight from_real(std::span<const double> c) { return Weight(std::vector<cplx>(c.begin(), c.end())); }
  static Weight from_rational(const RationalVector& c) {
    Weight w(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) w.coords[i] = c[i].to_double();
    return w;
  }

  std::size_t size() const { return coords.size(); }
  cplx& operator[](std::size_t i) { return coords[i]; }
  const cplx& operator[](std::size_t i) const { return coords[i]; }

  cplx sum() const { return std::accumulate(coords.begin(), coords.end(), cplx{}); }
  bool is_real(double tol = 0.0) const {
    return std::all_of(coords.begin(), coords.end(), [&](cplx c) { return std::abs(c.imag()) <= tol; });
  }

  friend Weight operator+(Weight a, const Weight& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  }
  friend Weight operator-(Weight a, const Weight& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  }
  friend Weight operator*(cplx s, Weight a) {
    for (auto& c : a.coords) c *= s;
    return a;
  }
};

/// Element of S_{n+1}; perm[i] is the image of position i (0-based).
struct WeylElement {
  std::vector<int> perm;

  static WeylElement identity(int dim) {
    WeylElement w;
    w.perm.resize(static_cast<std::size_t>(dim));
    std::iota(w.perm.begin(), w.perm.end(), 0);
    return w;
  }
  static WeylElement longest(int dim) {
    WeylElement w = identity(dim);
    std::reverse(w.perm.begin(), w.perm.end());
    return w;
  }
  /// Simple reflection s_i swapping positions i and i+1 (0-based i).
  static WeylElement simple_reflection(int dim, int i) {
    WeylElement w = identity(dim);
    std::swap(w.perm[static_cast<std::size_t>(i)], w.perm[static_cast<std::size_t>(i) + 1]);
    return w;
  }

  std::size_t size() const { return perm.size(); }
  bool is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != static_cast<int>(i)) return false;
    return true;
  }
  WeylElement inverse() const {
    WeylElement w;
    w.perm.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) w.perm[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    return w;
  }
  /// (a*b)(i) = a(b(i)).
  friend WeylElement operator*(const WeylElement& a, const WeylElement& b) {
    if (a.size() != b.size()) throw dimension_mismatch_error(a.size(), b.size());
    WeylElement w;
    w.perm.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w.perm[i] = a.perm[static_cast<std::size_t>(b.perm[i])];
    return w;
  }
  friend bool operator==(const WeylElement&, const WeylElement&) = default;

  /// One-line notation with 1-based images, e.g. "3,1,2".
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < perm.size(); ++i) s += (i ? "," : "") + std::to_string(perm[i] + 1);
    return s;
  }
};

/// All elements of S_{dim} in lexicographic order of their one-line notation.
inline std::vector<WeylElement> weyl_group(int dim) {
  std::vector<WeylElement> out;
  WeylElement w = WeylElement::identity(dim);
  do {
    out.push_back(w);
  } while (std::next_permutation(w.perm.begin(), w.perm.end()));
  return out;
}

/// Positive root e_i - e_j, 0-based i < j.
struct PositiveRoot {
  int i;
  int j;
  int height() const { return j - i; }
};

class RootSystem {
 public:
  int rank() const { return rank_; }
  int dim() const { return rank_ + 1; }
  int num_positive_roots() const { return static_cast<int>(positive_.size()); }

  const std::vector<RationalVector>& simple_roots() const { return simple_roots_; }
  const std::vector<RationalVector>& positive_roots() const { return positive_roots_; }
  const std::vector<RationalVector>& fundamental_weights() const { return fundamental_weights_; }
  /// Index form of the positive roots, same order as positive_roots().
  const std::vector<PositiveRoot>& positive_root_pairs() const { return positive_; }

  /// Positive root as a real weight (coroot equals root in type A).
  Weight root_weight(std::size_t r) const { return Weight::from_rational(positive_roots_[r]); }
  /// Coefficients of a positive root over the simple roots.
  std::vector<int> simple_coordinates(std::size_t r) const {
    std::vector<int> c(static_cast<std::size_t>(rank_), 0);
    for (int s = positive_[r].i; s < positive_[r].j; ++s) c[static_cast<std::size_t>(s)] = 1;
    return c;
  }
  std::vector<int> root_as_ints(std::size_t r) const {
    std::vector<int> v(static_cast<std::size_t>(dim()), 0);
    v[static_cast<std::size_t>(positive_[r].i)] = 1;
    v[static_cast<std::size_t>(positive_[r].j)] = -1;
    return v;
  }

 private:
  friend RootSystem build_root_system(int n);

  int rank_ = 0;
  std::vector<RationalVector> simple_roots_;
  std::vector<RationalVector> positive_roots_;
  std::vector<RationalVector> fundamental_weights_;
  std::vector<PositiveRoot> positive_;
};

/// Root data of A_n; positive roots ordered lexicographically by (i, j).
inline RootSystem build_root_system(int n) {
  if (n < 1 || n > kMaxRank) throw invalid_rank_error(n);
  RootSystem R;
  R.rank_ = n;
  const int d = n + 1;
  auto unit_diff = [d](int i, int j) {
    RationalVector v(static_cast<std::size_t>(d));
    v[static_cast<std::size_t>(i)] = 1;
    v[static_cast<std::size_t>(j)] = -1;
    return v;
  };
  for (int i = 0; i < n; ++i) R.simple_roots_.push_back(unit_diff(i, i + 1));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      R.positive_roots_.push_back(unit_diff(i, j));
      R.positive_.push_back({i, j});
    }
  // Lambda_j = (e_1+...+e_j) - j/(n+1) (1,...,1)
  for (int j = 1; j <= n; ++j) {
    RationalVector v(static_cast<std::size_t>(d), Rational(-j, d));
    for (int i = 0; i < j; ++i) v[static_cast<std::size_t>(i)] += 1;
    R.fundamental_weights_.push_back(std::move(v));
  }
  return R;
}

inline cplx pairing(const Weight& u, const Weight& v) {
  if (u.size() != v.size()) throw dimension_mismatch_error(u.size(), v.size());
  cplx s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

/// (u, e_i - e_j) for a positive root given by index pair.
inline cplx pairing(const Weight& u, const PositiveRoot& a) {
  return u[static_cast<std::size_t>(a.i)] - u[static_cast<std::size_t>(a.j)];
}

/// Exact half-sum with integer scale: (c/2) * sum of positive roots; c = 1 gives delta.
inline RationalVector half_sum_exact(const RootSystem& R) {
  RationalVector v(static_cast<std::size_t>(R.dim()));
  for (const auto& a : R.positive_roots())
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += a[i] * Rational(1, 2);
  return v;
}

/// (c/2) * sum over positive roots; c = 1 gives delta, c = k gives rho(k).
inline Weight weighted_half_sum(const RootSystem& R, cplx c) {
  return c * Weight::from_rational(half_sum_exact(R));
}

/// Coordinate i of the result is lambda_{w^{-1}(i)}.
inline Weight weyl_act(const WeylElement& w, const Weight& lambda) {
  if (w.size() != lambda.size()) throw dimension_mismatch_error(w.size(), lambda.size());
  Weight out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) out[static_cast<std::size_t>(w.perm[i])] = lambda[i];
  return out;
}

/// Number of inversions.
inline int weyl_length(const WeylElement& w) {
  int inv = 0;
  for (std::size_t i = 0; i < w.perm.size(); ++i)
    for (std::size_t j = i + 1; j < w.perm.size(); ++j)
      if (w.perm[i] > w.perm[j]) ++inv;
  return inv;
}

/// Simple root attached to every variable of pattern row j: alpha_{n+1-j} (1-based).
inline int row_root(int j, int n) {
  if (n < 1 || n > kMaxRank) throw invalid_rank_error(n);
  if (j < 1 || j > n) throw std::out_of_range("row_root: row " + std::to_string(j) + " outside 1.." + std::to_string(n));
  return n + 1 - j;
}

}  // namespace hopdam
