#include "inkmetrics/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

namespace {

// Per-point values of L_k, its antiderivative F_k = int_0^s L_k and the
// second antiderivative G_k = int_0^s F_k, for k = 0..d. With x = 2s - 1:
//   int_0^s P_n(2t-1) dt = (P_{n+1}(x) - P_{n-1}(x)) / (2(2n+1)),  n >= 1
struct Antiderivatives {
  std::vector<double> l, f, g;

  Antiderivatives(int degree, double s) : l(degree + 1), f(degree + 1), g(degree + 1) {
    std::vector<double> p(degree + 3);
    legendre_values(2.0 * s - 1.0, p);
    std::vector<double> integral(degree + 2);
    integral[0] = s;
    for (int n = 1; n <= degree + 1; ++n) integral[n] = (p[n + 1] - p[n - 1]) / (2.0 * (2.0 * n + 1.0));

    for (int k = 0; k <= degree; ++k) {
      const double norm = std::sqrt(2.0 * k + 1.0);
      l[k] = norm * p[k];
      f[k] = norm * integral[k];
      if (k == 0) {
        g[k] = 0.5 * s * s;
      } else {
        g[k] = norm / (2.0 * (2.0 * k + 1.0)) * (integral[k + 1] - integral[k - 1]);
      }
    }
  }
};

void check_basis(const SeriesPair& series, const LSBasis& basis) {
  if (!(series.basis == basis.key()) || series.x.size() != basis.size() || series.y.size() != basis.size()) {
    throw ValidationError("series does not belong to basis " + basis.key().to_string());
  }
}

}  // namespace

SeriesPair project(const ParameterizedTrace& trace, const LSBasis& basis) {
  const int degree = basis.degree();
  const double mu = basis.mu();
  if (trace.points.size() < 2) throw DegenerateError("trace needs at least two points");

  // Sobolev inner products of the trace with each L_k.
  std::vector<double> ax(degree + 1, 0.0), ay(degree + 1, 0.0);
  Antiderivatives prev(degree, trace.points.front().s);
  for (std::size_t j = 1; j < trace.points.size(); ++j) {
    const auto& pa = trace.points[j - 1];
    const auto& pb = trace.points[j];
    Antiderivatives cur(degree, pb.s);
    const double h = pb.s - pa.s;
    if (h > 0.0) {
      const double slope_x = (pb.x - pa.x) / h;
      const double slope_y = (pb.y - pa.y) / h;
      for (int k = 0; k <= degree; ++k) {
        const double dg = cur.g[k] - prev.g[k];
        const double dl = cur.l[k] - prev.l[k];
        ax[k] += pb.x * cur.f[k] - pa.x * prev.f[k] - slope_x * dg + mu * slope_x * dl;
        ay[k] += pb.y * cur.f[k] - pa.y * prev.f[k] - slope_y * dg + mu * slope_y * dl;
      }
    }
    prev = std::move(cur);
  }

  SeriesPair out;
  out.basis = basis.key();
  out.x.assign(degree + 1, 0.0);
  out.y.assign(degree + 1, 0.0);
  for (int i = 0; i <= degree; ++i) {
    const auto row = basis.legendre_row(i);
    for (int k = 0; k <= i; ++k) {
      out.x[i] += row[k] * ax[k];
      out.y[i] += row[k] * ay[k];
    }
  }
  return out;
}

Curve to_curve(const SeriesPair& series, const LSBasis& basis) {
  check_basis(series, basis);
  return {basis.combine(series.x), basis.combine(series.y)};
}

Point evaluate(const SeriesPair& series, const LSBasis& basis, double s, int order) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("evaluation parameter outside [0, 1]");
  if (order != 0 && order != 1) throw DomainError("derivative order must be 0 or 1");
  const Curve curve = to_curve(series, basis);
  return order == 0 ? curve.at(s) : curve.tangent(s);
}

double reconstruction_error(const ParameterizedTrace& trace, const SeriesPair& series, const LSBasis& basis) {
  const Curve curve = to_curve(series, basis);
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x;
  double sum = 0.0;
  for (const auto& p : trace.points) {
    const Point q = curve.at(p.s);
    sum += (q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y);
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double rms = std::sqrt(sum / static_cast<double>(trace.points.size()));
  const double diagonal = std::hypot(hi_x - lo_x, hi_y - lo_y);
  return diagonal > 0.0 ? rms / diagonal : rms;
}

}  // namespace inkmetrics
