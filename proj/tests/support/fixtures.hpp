#pragma once

// Shared test inputs: smooth parametric curves turned into symbols and a
// reference model annotated at the critical points of its own average.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "inkmetrics/catalog.hpp"
#include "inkmetrics/detect.hpp"
#include "inkmetrics/series.hpp"
#include "inkmetrics/symbol.hpp"

namespace fixture {

inline std::vector<inkmetrics::Point> polyline(const std::function<inkmetrics::Point(double)>& f, int n = 400) {
  std::vector<inkmetrics::Point> pts;
  for (int k = 0; k <= n; ++k) pts.push_back(f(static_cast<double>(k) / n));
  return pts;
}

inline inkmetrics::SymbolVector symbol_from(const std::vector<inkmetrics::Point>& pts, int degree = 12,
                                            double mu = 0.125) {
  const auto basis = inkmetrics::shared_basis(degree, mu);
  return inkmetrics::normalize(inkmetrics::project(inkmetrics::parameterize(pts), *basis));
}

// A wavy stroke with three interior extrema of y.
inline std::vector<inkmetrics::Point> wave() {
  return polyline([](double t) {
    return inkmetrics::Point{2.0 * t, std::sin(3 * std::numbers::pi * t) + 0.15 * t};
  });
}

// Every interior critical point of the model's own y becomes an annotation;
// maxima define the x line and minima the baseline.
inline inkmetrics::AnnotatedModel self_annotated(const std::string& id, const inkmetrics::SymbolVector& average) {
  inkmetrics::AnnotatedModel m;
  m.class_id = id;
  m.average = average;
  m.average.set_class_label(id);
  m.sample_count = 1;
  const auto basis = inkmetrics::shared_basis(average.basis());
  for (const auto& c : inkmetrics::critical_points(basis->combine(average.y()))) {
    if (c.boundary) continue;
    m.annotations.push_back({c.s,
                             c.kind == inkmetrics::ExtremumKind::kMax ? inkmetrics::LineType::kXLine
                                                                      : inkmetrics::LineType::kBaseline,
                             c.kind});
  }
  return m;
}

// The average plus Gaussian noise of relative size `sigma` on the shape
// coefficients, renormalized.
inline inkmetrics::SymbolVector perturbed(const inkmetrics::SymbolVector& v, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  std::vector<double> c(v.coeffs().begin(), v.coeffs().end());
  const std::size_t half = c.size() / 2;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != 0 && i != half) c[i] += n(rng);
  }
  double norm = 0.0;
  for (double x : c) norm += x * x;
  norm = std::sqrt(norm);
  for (auto& x : c) x /= norm;
  return inkmetrics::SymbolVector(std::move(c), v.transform(), v.basis(), v.class_label());
}

}  // namespace fixture
