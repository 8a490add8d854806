#include "inkmetrics/legendre.hpp"

#include <algorithm>
#include <cmath>

namespace inkmetrics {

void legendre_values(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nn = static_cast<double>(n);
    out[n + 1] = ((2.0 * nn + 1.0) * x * out[n] - nn * out[n - 1]) / (nn + 1.0);
  }
}

// P_n, P_n' and P_n'' via the recurrences
//   P'_{n+1} = P'_{n-1} + (2n+1) P_n,  P''_{n+1} = P''_{n-1} + (2n+1) P'_n,
// summed on the fly so no temporary arrays are needed.
LegendrePoly::Jet LegendrePoly::jet(double s) const {
  Jet out;
  if (coeffs_.empty()) return out;
  const double x = 2.0 * s - 1.0;

  double p_prev = 1.0, p = x;
  double dp_prev = 0.0, dp = 1.0;
  double ddp_prev = 0.0, ddp = 0.0;

  out.value = coeffs_[0];
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double norm = std::sqrt(2.0 * static_cast<double>(k) + 1.0);
    out.value += coeffs_[k] * norm * p;
    out.d1 += coeffs_[k] * norm * dp;
    out.d2 += coeffs_[k] * norm * ddp;

    const double kk = static_cast<double>(k);
    const double p_next = ((2.0 * kk + 1.0) * x * p - kk * p_prev) / (kk + 1.0);
    const double dp_next = dp_prev + (2.0 * kk + 1.0) * p;
    const double ddp_next = ddp_prev + (2.0 * kk + 1.0) * dp;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    ddp_prev = ddp;
    ddp = ddp_next;
  }
  // d/ds = 2 d/dx
  out.d1 *= 2.0;
  out.d2 *= 4.0;
  return out;
}

double LegendrePoly::value(double s) const { return jet(s).value; }

double LegendrePoly::derivative(double s) const { return jet(s).d1; }

LegendrePoly& LegendrePoly::operator+=(const LegendrePoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

LegendrePoly& LegendrePoly::operator*=(double k) {
  for (auto& c : coeffs_) c *= k;
  return *this;
}

std::vector<Crossing> sign_changes(const std::function<double(double)>& f, int grid, double tolerance) {
  grid = std::max(grid, 1);
  std::vector<double> nodes(grid + 1), values(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    nodes[i] = (i == grid) ? 1.0 : static_cast<double>(i) / grid;
    values[i] = f(nodes[i]);
  }

  std::vector<Crossing> out;
  for (int i = 0; i < grid; ++i) {
    const double fa = values[i];
    const double fb = values[i + 1];
    if (fa != 0.0 && fb != 0.0 && std::signbit(fa) != std::signbit(fb)) {
      double lo = nodes[i], hi = nodes[i + 1], flo = fa;
      while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back({0.5 * (lo + hi), fa < 0.0});
    } else if (fb == 0.0 && i + 1 < grid && fa != 0.0) {
      // Exact zero on an interior node: a crossing only if the next nonzero
      // value has the opposite sign.
      int j = i + 2;
      while (j <= grid && values[j] == 0.0) ++j;
      if (j <= grid && j == i + 2 && std::signbit(fa) != std::signbit(values[j])) {
        out.push_back({nodes[i + 1], fa < 0.0});
      }
    }
  }
  return out;
}

}  // namespace inkmetrics
