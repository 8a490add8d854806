#pragma once

#include <memory>
#include <string>
#include <vector>

#include "inkmetrics/legendre.hpp"

namespace inkmetrics {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 30;
inline constexpr int kDefaultDegree = 12;
inline constexpr double kDefaultMu = 0.125;

struct BasisKey {
  int degree = kDefaultDegree;
  double mu = kDefaultMu;

  friend bool operator==(const BasisKey&, const BasisKey&) = default;
  std::string to_string() const;
};

// Orthonormal polynomials B_0..B_d on [0, 1] under the Sobolev inner product
//   <f, g> = int_0^1 f g ds + mu int_0^1 f' g' ds,
// obtained by Gram-Schmidt on the monomials s^i. Each B_i has exact degree i
// and a positive leading coefficient.
//
// The orthogonalization runs in 100-digit binary floating point on the
// closed-form monomial Gram matrix. Results are kept in two forms: monomial
// coefficients (rounded to double, informational; unusable for evaluation
// above degree ~12) and shifted-Legendre expansions, which back every
// evaluation.
class LSBasis {
 public:
  // Throws ConfigError unless 1 <= degree <= 30 and mu is finite and >= 0.
  LSBasis(int degree, double mu);

  int degree() const noexcept { return key_.degree; }
  double mu() const noexcept { return key_.mu; }
  const BasisKey& key() const noexcept { return key_; }
  std::size_t size() const noexcept { return legendre_.size(); }

  // B_i as a shifted-Legendre expansion.
  const LegendrePoly& function(std::size_t i) const { return legendre_.at(i); }
  // Row i: monomial coefficients of B_i, index j multiplies s^j.
  const std::vector<double>& monomial_coeffs(std::size_t i) const { return monomial_.at(i); }
  const std::vector<double>& derivative_coeffs(std::size_t i) const { return monomial_deriv_.at(i); }

  double value(std::size_t i, double s) const { return function(i).value(s); }
  double derivative(std::size_t i, double s) const { return function(i).derivative(s); }

  // Converts a coefficient vector c_0..c_d in this basis into the shifted
  // Legendre form of sum c_i B_i.
  LegendrePoly combine(std::span<const double> coeffs) const;

  // Transition matrix entry: B_i = sum_k legendre_row(i)[k] L_k.
  std::span<const double> legendre_row(std::size_t i) const { return function(i).coeffs(); }

 private:
  BasisKey key_;
  std::vector<LegendrePoly> legendre_;
  std::vector<std::vector<double>> monomial_;
  std::vector<std::vector<double>> monomial_deriv_;
};

LSBasis build_basis(int degree, double mu);

// Process-wide cache, one basis per (degree, mu). Concurrent lookups take a
// shared lock; construction of a missing entry takes the exclusive lock.
std::shared_ptr<const LSBasis> shared_basis(int degree, double mu);
inline std::shared_ptr<const LSBasis> shared_basis(const BasisKey& key) { return shared_basis(key.degree, key.mu); }

}  // namespace inkmetrics
