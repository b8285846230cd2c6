#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hopdam {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_rank_error : public error {
 public:
  explicit invalid_rank_error(int n)
      : error("invalid rank n=" + std::to_string(n) + " (expected 1..8)"), rank(n) {}
  int rank;
};

class dimension_mismatch_error : public error {
 public:
  dimension_mismatch_error(std::size_t a, std::size_t b)
      : error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// log_gamma evaluated at a nonpositive integer.
class pole_error : public error {
 public:
  explicit pole_error(long long at)
      : error("gamma pole at z=" + std::to_string(at)), pole(at) {}
  long long pole;
};

/// A closed form hit a gamma pole or a non-generic spectral parameter.
class degenerate_parameter_error : public error {
 public:
  degenerate_parameter_error(const std::string& what, std::vector<int> root)
      : error(what), root(std::move(root)) {}
  std::vector<int> root;  // offending positive root in the e-basis, empty if not root-specific
};

/// (mu, mu + 2 lambda) vanished in the series recursion.
class resonance_error : public error {
 public:
  resonance_error(std::vector<int> index, double denominator)
      : error(describe(index, denominator)), index(std::move(index)), denominator(denominator) {}
  std::vector<int> index;
  double denominator;

 private:
  static std::string describe(const std::vector<int>& m, double d) {
    std::string s = "resonant spectral parameter at mu=(";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s + "), |(mu,mu+2lambda)|=" + std::to_string(d);
  }
};

class outside_chamber_error : public error {
 public:
  using error::error;
};

class divergent_weight_error : public error {
 public:
  using error::error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class accuracy_error : public error {
 public:
  accuracy_error(const std::string& what, double best_real, double best_imag, double estimate)
      : error(what), best_real(best_real), best_imag(best_imag), estimate(estimate) {}
  double best_real;
  double best_imag;
  double estimate;
};

class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double estimate) : error(what), estimate(estimate) {}
  double estimate;
};

class empty_domain_error : public error {
 public:
  using error::error;
};

}  // namespace hopdam
