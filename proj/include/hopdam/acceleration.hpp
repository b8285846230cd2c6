#pragma once

// Limit extrapolation for sequences S_j -> S.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hopdam {

enum class Acceleration { none, richardson, epsilon };

struct Extrapolation {
  std::complex<double> value;
  double error = std::numeric_limits<double>::infinity();
};

/// Wynn's epsilon algorithm. Exact for S_j = S + sum_i c_i r_i^j with finitely many
/// ratios, so it handles geometric sampling of expansions with unknown exponents.
/// The error estimate is the distance between the two last even-column diagonal values.
inline Extrapolation wynn_epsilon(std::span<const std::complex<double>> seq) {
  using C = std::complex<double>;
  if (seq.empty()) throw std::invalid_argument("wynn_epsilon: empty sequence");
  std::vector<C> prev(seq.size() + 1, C{});
  std::vector<C> cur(seq.begin(), seq.end());
  std::vector<C> estimates{cur.back()};
  for (int col = 1; cur.size() > 1; ++col) {
    std::vector<C> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const C diff = cur[i + 1] - cur[i];
      if (std::abs(diff) == 0.0) {
        // sequence already converged in this column
        return {cur[i + 1], estimates.size() > 1 ? std::abs(estimates.back() - estimates[estimates.size() - 2]) : 0.0};
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0) estimates.push_back(cur.back());
  }
  Extrapolation out{estimates.back(), std::numeric_limits<double>::infinity()};
  if (estimates.size() >= 2) out.error = std::abs(estimates.back() - estimates[estimates.size() - 2]);
  return out;
}

/// Generalized Richardson extrapolation with known exponents: models
/// S(h) = S + sum_i c_i h^{p_i} and eliminates the leading `exponents.size()` terms
/// (or as many as the samples allow). Uses the last m+1 samples for m terms, and
/// reports the change against the m-1 term estimate.
inline Extrapolation richardson(std::span<const double> h, std::span<const std::complex<double>> seq,
                                std::span<const double> exponents) {
  using C = std::complex<double>;
  if (h.size() != seq.size() || seq.empty()) throw std::invalid_argument("richardson: size mismatch");
  auto solve = [&](std::size_t terms) -> C {
    // Unknowns: S, c_1..c_terms on the last terms+1 samples; Gaussian elimination with pivoting.
    const std::size_t m = terms + 1;
    const std::size_t first = seq.size() - m;
    std::vector<std::vector<C>> A(m, std::vector<C>(m + 1));
    for (std::size_t r = 0; r < m; ++r) {
      A[r][0] = 1.0;
      for (std::size_t c = 0; c < terms; ++c) A[r][c + 1] = std::pow(h[first + r], exponents[c]);
      A[r][m] = seq[first + r];
    }
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m; ++r)
        if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
      std::swap(A[c], A[piv]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == c) continue;
        const C f = A[r][c] / A[c][c];
        for (std::size_t q = c; q <= m; ++q) A[r][q] -= f * A[c][q];
      }
    }
    return A[0][m] / A[0][0];
  };
  const std::size_t terms = std::min(exponents.size(), seq.size() - 1);
  Extrapolation out{solve(terms), std::numeric_limits<double>::infinity()};
  if (terms >= 1) out.error = std::abs(out.value - solve(terms - 1));
  return out;
}

}  // namespace hopdam
