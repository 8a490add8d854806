#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inkmetrics/catalog.hpp"
#include "inkmetrics/ink.hpp"

namespace inkmetrics {

// A handwritten-looking glyph drawn through control points (Catmull-Rom per
// stroke). Units: baseline at y = 0, x line at y = 1.
struct GlyphTemplate {
  struct Hint {
    std::size_t point;  // control point index, counted across all strokes
    LineType line_type;
    ExtremumKind kind;
  };

  std::string id;
  std::vector<std::vector<Point>> strokes;
  std::vector<Hint> hints;
  double slant_deg = 0.0;
};

const std::vector<GlyphTemplate>& builtin_glyphs();

// Dense polyline rendering of the template, `per_segment` samples between
// consecutive control points.
InkSymbol render_glyph(const GlyphTemplate& glyph, int per_segment = 24);

// Projects the rendered glyph and turns every hint into an annotation by
// snapping the control point's arc-length location to the nearest extremum
// of the requested kind.
AnnotatedModel build_model(const GlyphTemplate& glyph, const BasisKey& basis);

Catalog builtin_catalog(const BasisKey& basis = {});

struct SyntheticSample {
  SymbolVector vector;
  // Where each annotated extremum really sits on this sample.
  std::vector<double> expected_s;
  std::uint64_t seed = 0;
  std::optional<std::size_t> shifted_point;  // set for targeted samples
  double shift = 0.0;
};

struct SyntheticClass {
  AnnotatedModel base;
  std::vector<SyntheticSample> samples;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct SynthesisOptions {
  double targeted_fraction = 0.1;
  double min_shift = 0.0;
  double max_shift = 0.15;
  // Largest factor by which the warp may stretch or squeeze the stretches of
  // stroke on either side of the moved point.
  double max_stretch = 4.0;
};

// Samples are normalize(average + N(0, noise^2) on every shape coefficient).
// A `targeted_fraction` of them first have one interior annotated extremum,
// chosen uniformly, moved along the parameter by a shift of random sign and
// magnitude in [min_shift, max_shift]. The warp is applied to `source` (the
// ink the average was projected from) when given, else to a dense
// reconstruction of the average.
SyntheticClass generate_synthetic_class(const AnnotatedModel& base, int n, double noise, std::uint64_t seed,
                                        const SynthesisOptions& options = {},
                                        const ParameterizedTrace* source = nullptr);

// Reparameterizes the source trace with the piecewise-linear warp that moves
// annotation `point` from s to s + shift and keeps every other annotation
// (and both endpoints) fixed, then projects it. Throws DomainError when the
// move would cross a neighbouring annotation or stretch either side by more
// than `max_stretch`.
SyntheticSample shift_determining_point(const AnnotatedModel& base, std::size_t point, double shift,
                                        const ParameterizedTrace* source = nullptr, double max_stretch = 4.0);

// Coefficientwise Gaussian noise on the shape part, then renormalization.
SymbolVector add_noise(const SymbolVector& v, double noise, std::uint64_t seed);

}  // namespace inkmetrics
