#pragma once

#include <vector>

#include "inkmetrics/basis.hpp"
#include "inkmetrics/ink.hpp"

namespace inkmetrics {

// Coefficients of x(s) ~ sum x_i B_i(s) and y(s) ~ sum y_i B_i(s).
struct SeriesPair {
  std::vector<double> x;
  std::vector<double> y;
  BasisKey basis;
};

// Sobolev projection of the piecewise-linear interpolant of `trace`. The
// integrals are evaluated in closed form on each linear piece.
SeriesPair project(const ParameterizedTrace& trace, const LSBasis& basis);

// Throws DomainError if s is outside [0, 1] or order is not 0 or 1, and
// ValidationError if the series does not belong to `basis`.
Point evaluate(const SeriesPair& series, const LSBasis& basis, double s, int order = 0);

// Both coordinate functions in shifted-Legendre form, for repeated evaluation.
struct Curve {
  LegendrePoly x;
  LegendrePoly y;

  Point at(double s) const { return {x.value(s), y.value(s)}; }
  Point tangent(double s) const { return {x.derivative(s), y.derivative(s)}; }
};

Curve to_curve(const SeriesPair& series, const LSBasis& basis);

// RMS distance between trace points and the series at the same s, divided by
// the diagonal of the trace's bounding box.
double reconstruction_error(const ParameterizedTrace& trace, const SeriesPair& series, const LSBasis& basis);

}  // namespace inkmetrics
