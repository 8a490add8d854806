#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace inkmetrics {

// Values of the classical Legendre polynomials P_0..P_n at x in [-1, 1].
void legendre_values(double x, std::span<double> out);

// A polynomial on [0, 1] stored as coefficients in the L2-orthonormal
// shifted Legendre basis L_k(s) = sqrt(2k+1) P_k(2s - 1). This is the
// evaluation form used throughout: it stays accurate at degrees where
// monomial coefficients lose every significant digit.
class LegendrePoly {
 public:
  struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
  };

  LegendrePoly() = default;
  explicit LegendrePoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  double value(double s) const;
  double derivative(double s) const;
  Jet jet(double s) const;

  LegendrePoly& operator+=(const LegendrePoly& other);
  LegendrePoly& operator*=(double k);

  friend LegendrePoly operator*(double k, LegendrePoly p) { return p *= k; }
  friend LegendrePoly operator+(LegendrePoly a, const LegendrePoly& b) { return a += b; }

 private:
  std::vector<double> coeffs_;
};

struct Crossing {
  double s = 0.0;
  bool rising = false;  // f goes from negative to positive
};

// Interior sign changes of a continuous function on [0, 1], isolated on a
// uniform grid and refined by bisection to `tolerance`. Zeros that do not
// change sign (even multiplicity, or two roots inside one grid cell) and
// zeros exactly at s = 0 or s = 1 are not reported.
std::vector<Crossing> sign_changes(const std::function<double(double)>& f, int grid = 256,
                                   double tolerance = 1e-12);

}  // namespace inkmetrics
