#include "inkmetrics/symbol.hpp"

#include <cmath>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

SymbolVector::SymbolVector(std::vector<double> coeffs, Transform transform, BasisKey basis,
                           std::optional<std::string> class_label)
    : coeffs_(std::move(coeffs)), transform_(transform), basis_(basis), class_label_(std::move(class_label)) {
  if (coeffs_.size() != 2 * static_cast<std::size_t>(basis_.degree + 1)) {
    throw ValidationError("coefficient vector length does not match " + basis_.to_string());
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ValidationError("non-finite coefficient");
  }
  if (!(transform_.scale > 0.0) || !std::isfinite(transform_.scale)) {
    throw ValidationError("transform scale must be positive");
  }
}

double SymbolVector::norm() const {
  double sum = 0.0;
  for (double c : coeffs_) sum += c * c;
  return std::sqrt(sum);
}

SeriesPair SymbolVector::denormalize() const {
  SeriesPair out;
  out.basis = basis_;
  out.x.assign(x().begin(), x().end());
  out.y.assign(y().begin(), y().end());
  for (auto& c : out.x) c *= transform_.scale;
  for (auto& c : out.y) c *= transform_.scale;
  // B_0 is the constant 1 for every mu, so translation lives in entry 0.
  out.x[0] += transform_.tx;
  out.y[0] += transform_.ty;
  return out;
}

Curve SymbolVector::normalized_curve(const LSBasis& basis) const {
  if (!(basis_ == basis.key())) throw ValidationError("symbol does not belong to basis " + basis.key().to_string());
  return {basis.combine(x()), basis.combine(y())};
}

SymbolVector normalize(const SeriesPair& series, std::optional<std::string> class_label) {
  const std::size_t n = series.x.size();
  if (n == 0 || series.y.size() != n) throw ValidationError("malformed series");
  std::vector<double> coeffs;
  coeffs.reserve(2 * n);
  coeffs.insert(coeffs.end(), series.x.begin(), series.x.end());
  coeffs.insert(coeffs.end(), series.y.begin(), series.y.end());
  coeffs[0] = 0.0;
  coeffs[n] = 0.0;

  double sum = 0.0;
  for (double c : coeffs) sum += c * c;
  const double norm = std::sqrt(sum);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateError("symbol collapses to a point after centering");
  for (auto& c : coeffs) c /= norm;

  return SymbolVector(std::move(coeffs), Transform{series.x[0], series.y[0], norm}, series.basis,
                      std::move(class_label));
}

SymbolVector average(std::span<const SymbolVector> samples) {
  if (samples.empty()) throw ValidationError("cannot average an empty sample list");
  const auto& first = samples.front();
  std::vector<double> sum(first.coeffs().size(), 0.0);
  Transform t{0.0, 0.0, 0.0};
  for (const auto& v : samples) {
    if (!(v.basis() == first.basis())) throw ValidationError("cannot average symbols from different bases");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v.coeffs()[i];
    t.tx += v.transform().tx;
    t.ty += v.transform().ty;
    t.scale += v.transform().scale;
  }
  const double n = static_cast<double>(samples.size());
  double norm = 0.0;
  for (auto& c : sum) {
    c /= n;
    norm += c * c;
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw DegenerateError("class average is the zero vector");
  for (auto& c : sum) c /= norm;
  t.tx /= n;
  t.ty /= n;
  t.scale /= n;
  return SymbolVector(std::move(sum), t, first.basis(), first.class_label());
}

SymbolVector interpolate(const SymbolVector& start, const SymbolVector& target, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("homotopy parameter outside [0, 1]");
  if (!(start.basis() == target.basis())) throw ValidationError("cannot interpolate across bases");
  if (t == 0.0) return start;
  if (t == 1.0) return target;
  const auto a = start.coeffs();
  const auto b = target.coeffs();
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = (1.0 - t) * a[i] + t * b[i];
  const auto& ta = start.transform();
  const auto& tb = target.transform();
  Transform tr{(1.0 - t) * ta.tx + t * tb.tx, (1.0 - t) * ta.ty + t * tb.ty, (1.0 - t) * ta.scale + t * tb.scale};
  return SymbolVector(std::move(c), tr, start.basis(), target.class_label());
}

}  // namespace inkmetrics
