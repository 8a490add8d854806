#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inkmetrics/series.hpp"

namespace inkmetrics {

// Maps normalized curve coordinates to the page: page = scale * p + (tx, ty).
struct Transform {
  double tx = 0.0;
  double ty = 0.0;
  double scale = 1.0;

  Point apply(Point p) const { return {tx + scale * p.x, ty + scale * p.y}; }
  double apply_y(double y) const { return ty + scale * y; }

  friend bool operator==(const Transform&, const Transform&) = default;
};

// A symbol as a point in coefficient space: (x_0..x_d, y_0..y_d). Vectors
// produced by normalize() have x_0 = y_0 = 0 and unit Euclidean norm; the
// homotopy produces intermediate vectors that are not renormalized.
class SymbolVector {
 public:
  SymbolVector() = default;
  SymbolVector(std::vector<double> coeffs, Transform transform, BasisKey basis,
               std::optional<std::string> class_label = std::nullopt);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<const double> x() const noexcept { return std::span(coeffs_).first(coeffs_.size() / 2); }
  std::span<const double> y() const noexcept { return std::span(coeffs_).last(coeffs_.size() / 2); }
  const Transform& transform() const noexcept { return transform_; }
  const BasisKey& basis() const noexcept { return basis_; }
  const std::optional<std::string>& class_label() const noexcept { return class_label_; }

  void set_transform(const Transform& t) { transform_ = t; }
  void set_class_label(std::optional<std::string> label) { class_label_ = std::move(label); }

  double norm() const;

  // The un-normalized series this vector stands for, i.e. transform applied
  // to the coefficients (scale on every entry, translation on entry 0).
  SeriesPair denormalize() const;

  Curve normalized_curve(const LSBasis& basis) const;

  friend bool operator==(const SymbolVector&, const SymbolVector&) = default;

 private:
  std::vector<double> coeffs_;
  Transform transform_;
  BasisKey basis_;
  std::optional<std::string> class_label_;
};

// Throws DegenerateError when nothing is left after centering.
SymbolVector normalize(const SeriesPair& series, std::optional<std::string> class_label = std::nullopt);

// Componentwise mean of normalized vectors, rescaled to unit norm. The
// transform is the mean of the sample transforms.
SymbolVector average(std::span<const SymbolVector> samples);

// (1 - t) start + t target, componentwise, on coefficients and transform.
SymbolVector interpolate(const SymbolVector& start, const SymbolVector& target, double t);

}  // namespace inkmetrics
