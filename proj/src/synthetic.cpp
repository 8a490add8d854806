#include "inkmetrics/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "inkmetrics/detect.hpp"
#include "inkmetrics/error.hpp"
#include "inkmetrics/series.hpp"

namespace inkmetrics {

namespace {

using L = LineType;
using K = ExtremumKind;

std::vector<GlyphTemplate> make_glyphs() {
  std::vector<GlyphTemplate> g;
  g.push_back({"u",
               {{{0, 1}, {0.02, 0.3}, {0.25, 0}, {0.48, 0.3}, {0.55, 1}, {0.55, 0.3}, {0.62, 0}}},
               {{0, L::kXLine, K::kMax}, {2, L::kBaseline, K::kMin}, {4, L::kXLine, K::kMax}, {6, L::kBaseline, K::kMin}}});
  g.push_back({"n",
               {{{0, 1}, {0, 0}, {0.05, 0.7}, {0.3, 1}, {0.55, 0.7}, {0.6, 0}}},
               {{0, L::kXLine, K::kMax}, {1, L::kBaseline, K::kMin}, {3, L::kXLine, K::kMax}, {5, L::kBaseline, K::kMin}}});
  g.push_back({"m",
               {{{0, 1}, {0, 0}, {0.05, 0.7}, {0.25, 1}, {0.45, 0.7}, {0.47, 0}, {0.5, 0.7}, {0.7, 1}, {0.9, 0.7},
                 {0.92, 0}}},
               {{1, L::kBaseline, K::kMin},
                {3, L::kXLine, K::kMax},
                {5, L::kBaseline, K::kMin},
                {7, L::kXLine, K::kMax},
                {9, L::kBaseline, K::kMin}}});
  g.push_back({"h",
               {{{0, 1.8}, {0, 0}, {0.05, 0.7}, {0.3, 1}, {0.55, 0.7}, {0.6, 0}}},
               {{0, L::kAscender, K::kMax}, {1, L::kBaseline, K::kMin}, {3, L::kXLine, K::kMax}, {5, L::kBaseline, K::kMin}}});
  g.push_back({"p",
               {{{0, 1}, {0, -0.8}, {0, 0.6}, {0.3, 1}, {0.55, 0.6}, {0.45, 0.05}, {0.05, 0.1}}},
               {{0, L::kXLine, K::kMax}, {1, L::kDescender, K::kMin}, {3, L::kXLine, K::kMax}, {5, L::kBaseline, K::kMin}}});
  g.push_back({"q",
               {{{0.55, 0.8}, {0.3, 1}, {0.02, 0.6}, {0.1, 0.05}, {0.45, 0.1}, {0.55, 1}, {0.55, -0.8}}},
               {{1, L::kXLine, K::kMax}, {3, L::kBaseline, K::kMin}, {5, L::kXLine, K::kMax}, {6, L::kDescender, K::kMin}}});
  g.push_back({"eta",
               {{{0, 1}, {0, 0}, {0.05, 0.7}, {0.3, 1}, {0.55, 0.7}, {0.6, -0.8}}},
               {{0, L::kXLine, K::kMax}, {1, L::kBaseline, K::kMin}, {3, L::kXLine, K::kMax}, {5, L::kDescender, K::kMin}}});
  g.push_back({"o",
               {{{0.5, 1}, {0.1, 0.85}, {0, 0.5}, {0.1, 0.1}, {0.5, 0}, {0.9, 0.1}, {1, 0.5}, {0.9, 0.9}, {0.5, 1},
                 {0.3, 0.95}}},
               {{4, L::kBaseline, K::kMin}, {8, L::kXLine, K::kMax}}});
  g.push_back({"v",
               {{{0, 1}, {0.3, 0}, {0.6, 1}}},
               {{0, L::kXLine, K::kMax}, {1, L::kBaseline, K::kMin}, {2, L::kXLine, K::kMax}}});
  g.push_back({"w",
               {{{0, 1}, {0.2, 0}, {0.4, 0.8}, {0.6, 0}, {0.8, 1}}},
               {{0, L::kXLine, K::kMax}, {1, L::kBaseline, K::kMin}, {3, L::kBaseline, K::kMin}, {4, L::kXLine, K::kMax}}});
  g.push_back({"two",
               {{{0.05, 1.2}, {0.4, 1.5}, {0.7, 1.2}, {0.5, 0.6}, {0, 0}, {0.2, 0.1}, {0.4, 0.02}, {0.75, 0.06}}},
               {{1, L::kCapLine, K::kMax}, {4, L::kBaseline, K::kMin}, {6, L::kBaseline, K::kMin}}});
  g.push_back({"z",
               {{{0, 1}, {0.5, 1.02}, {0, 0}, {0.2, 0.07}, {0.4, 0.0}, {0.6, 0.05}}},
               {{1, L::kXLine, K::kMax}, {2, L::kBaseline, K::kMin}, {4, L::kBaseline, K::kMin}}});
  g.push_back({"r",
               {{{0, 0}, {0.02, 1.0}, {0.08, 0.72}, {0.25, 0.97}, {0.45, 0.85}}},
               {{0, L::kBaseline, K::kMin}, {1, L::kXLine, K::kMax}}});
  g.push_back({"three",
               {{{0.05, 1.3}, {0.35, 1.5}, {0.55, 1.2}, {0.25, 0.8}, {0.55, 0.55}, {0.4, 0.05}, {0.05, 0.2}}},
               {{1, L::kCapLine, K::kMax}, {5, L::kBaseline, K::kMin}}});
  g.push_back({"a",
               {{{0.55, 0.85}, {0.3, 1}, {0.02, 0.5}, {0.2, 0.02}, {0.5, 0.3}, {0.55, 1}, {0.55, 0.2}, {0.65, 0}}},
               {{1, L::kXLine, K::kMax}, {3, L::kBaseline, K::kMin}, {5, L::kXLine, K::kMax}, {7, L::kBaseline, K::kMin}}});
  g.push_back({"pi",
               {{{-0.05, 0.9}, {0.3, 1.0}, {0.8, 1.0}, {1.05, 1.1}}, {{0.3, 1}, {0.28, 0}}, {{0.75, 1}, {0.8, 0.05}, {0.9, 0}}},
               {{5, L::kBaseline, K::kMin}, {6, L::kXLine, K::kMax}, {8, L::kBaseline, K::kMin}}});
  return g;
}

std::vector<Point> catmull_rom(const std::vector<Point>& p, int per_segment) {
  if (p.size() < 2) return p;
  std::vector<Point> out;
  const auto at = [&p](std::ptrdiff_t i) {
    return p[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(p.size()) - 1))];
  };
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const Point p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
    for (int j = 0; j < per_segment; ++j) {
      const double t = static_cast<double>(j) / per_segment;
      const double t2 = t * t, t3 = t2 * t;
      const auto blend = [&](double a, double b, double c, double d) {
        return 0.5 * (2 * b + (-a + c) * t + (2 * a - 5 * b + 4 * c - d) * t2 + (-a + 3 * b - 3 * c + d) * t3);
      };
      out.push_back({blend(p0.x, p1.x, p2.x, p3.x), blend(p0.y, p1.y, p2.y, p3.y)});
    }
  }
  out.push_back(p.back());
  return out;
}

// Arc-length fraction of every control point along the concatenated strokes.
std::vector<double> control_point_fractions(const GlyphTemplate& glyph, const InkSymbol& ink, int per_segment) {
  std::vector<double> cumulative{0.0};
  const auto points = concatenate_strokes(ink);
  for (std::size_t i = 1; i < points.size(); ++i) {
    cumulative.push_back(cumulative.back() + std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y));
  }
  std::vector<double> out;
  std::size_t offset = 0;
  for (const auto& stroke : glyph.strokes) {
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      out.push_back(cumulative[offset + i * static_cast<std::size_t>(per_segment)] / cumulative.back());
    }
    offset += (stroke.size() - 1) * static_cast<std::size_t>(per_segment) + 1;
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

const std::vector<GlyphTemplate>& builtin_glyphs() {
  static const std::vector<GlyphTemplate> glyphs = make_glyphs();
  return glyphs;
}

InkSymbol render_glyph(const GlyphTemplate& glyph, int per_segment) {
  InkSymbol ink;
  ink.class_label = glyph.id;
  for (const auto& stroke : glyph.strokes) ink.strokes.push_back(catmull_rom(stroke, per_segment));
  return ink;
}

AnnotatedModel build_model(const GlyphTemplate& glyph, const BasisKey& basis) {
  constexpr int kPerSegment = 24;
  const auto ink = render_glyph(glyph, kPerSegment);
  const auto b = shared_basis(basis);
  AnnotatedModel model;
  model.class_id = glyph.id;
  model.average = normalize(project(parameterize(ink), *b), glyph.id);
  model.sample_count = 1;
  model.slant_deg = glyph.slant_deg;

  const auto fractions = control_point_fractions(glyph, ink, kPerSegment);
  const auto y = b->combine(model.average.y());
  for (const auto& hint : glyph.hints) {
    const auto snapped = snap_to_extremum(y, fractions.at(hint.point), hint.kind);
    model.annotations.push_back({snapped.s, hint.line_type, hint.kind});
  }
  return model;
}

Catalog builtin_catalog(const BasisKey& basis) {
  Catalog catalog;
  catalog.basis = basis;
  for (const auto& g : builtin_glyphs()) catalog.models.push_back(build_model(g, basis));
  return catalog;
}

SymbolVector add_noise(const SymbolVector& v, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw DomainError("noise amplitude must be >= 0");
  if (noise == 0.0) return v;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  std::vector<double> c(v.coeffs().begin(), v.coeffs().end());
  const std::size_t half = c.size() / 2;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != 0 && i != half) c[i] += gauss(rng);
  }
  double norm = 0.0;
  for (double x : c) norm += x * x;
  norm = std::sqrt(norm);
  for (auto& x : c) x /= norm;
  return SymbolVector(std::move(c), v.transform(), v.basis(), v.class_label());
}

SyntheticSample shift_determining_point(const AnnotatedModel& base, std::size_t point, double shift,
                                        const ParameterizedTrace* source, double max_stretch) {
  constexpr double kMargin = 0.02;
  if (point >= base.annotations.size()) throw DomainError("no annotation " + std::to_string(point) + " to shift");
  std::vector<double> knots{0.0, 1.0};
  for (const auto& a : base.annotations) knots.push_back(a.s);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const double from = base.annotations[point].s;
  const auto here = std::find(knots.begin(), knots.end(), from);
  if (here == knots.begin() || here + 1 == knots.end()) throw DomainError("cannot shift an endpoint annotation");
  const double lo = *(here - 1), hi = *(here + 1);
  const double to = from + shift;
  if (!(to > lo + kMargin && to < hi - kMargin)) throw DomainError("shift crosses a neighbouring annotation");
  const double left = (to - lo) / (from - lo), right = (hi - to) / (hi - from);
  if (std::max({left, 1 / left, right, 1 / right}) > max_stretch) {
    throw DomainError("shift stretches the stroke too much");
  }

  std::vector<double> moved = knots;
  moved[static_cast<std::size_t>(here - knots.begin())] = to;
  const auto warp = [&](double s) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), s);
    if (it == knots.end()) return 1.0;
    const auto i = static_cast<std::size_t>(it - knots.begin());
    return moved[i - 1] + (s - knots[i - 1]) / (knots[i] - knots[i - 1]) * (moved[i] - moved[i - 1]);
  };

  const auto basis = shared_basis(base.average.basis());
  ParameterizedTrace trace;
  if (source) {
    trace = *source;
  } else {
    const Curve curve = base.average.normalized_curve(*basis);
    constexpr int kDense = 1024;
    for (int i = 0; i <= kDense; ++i) {
      const double s = static_cast<double>(i) / kDense;
      const Point p = curve.at(s);
      trace.points.push_back({s, p.x, p.y});
    }
    trace.total_length = 1.0;
  }
  for (auto& p : trace.points) p.s = warp(p.s);

  SymbolVector v = normalize(project(trace, *basis), base.class_id);
  v.set_transform(base.average.transform());

  SyntheticSample out;
  out.vector = std::move(v);
  for (const auto& a : base.annotations) out.expected_s.push_back(warp(a.s));
  out.shifted_point = point;
  out.shift = shift;
  return out;
}

SyntheticClass generate_synthetic_class(const AnnotatedModel& base, int n, double noise, std::uint64_t seed,
                                        const SynthesisOptions& options, const ParameterizedTrace* source) {
  if (!(noise >= 0.0)) throw DomainError("noise amplitude must be >= 0");
  if (n < 0) throw DomainError("sample count must be >= 0");
  SyntheticClass out;
  out.base = base;
  out.noise = noise;
  out.seed = seed;

  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < base.annotations.size(); ++i) {
    if (base.annotations[i].s > 0.0 && base.annotations[i].s < 1.0) interior.push_back(i);
  }

  for (int k = 0; k < n; ++k) {
    const std::uint64_t sample_seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    std::mt19937_64 rng(sample_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SyntheticSample sample;
    bool targeted = false;
    if (!interior.empty() && unit(rng) < options.targeted_fraction) {
      const std::size_t point = interior[std::min(interior.size() - 1, static_cast<std::size_t>(unit(rng) * interior.size()))];
      const double direction = unit(rng) < 0.5 ? -1.0 : 1.0;
      const double magnitude = options.min_shift + (options.max_shift - options.min_shift) * unit(rng);
      for (double dir : {direction, -direction}) {
        try {
          sample = shift_determining_point(base, point, dir * magnitude, source, options.max_stretch);
          targeted = true;
          break;
        } catch (const DomainError&) {
        }
      }
    }
    sample.seed = sample_seed;
    if (!targeted) {
      sample.vector = base.average;
      for (const auto& a : base.annotations) sample.expected_s.push_back(a.s);
    }
    sample.vector = add_noise(sample.vector, noise, mix_seed(sample_seed, 0xA5));
    out.samples.push_back(std::move(sample));
  }
  return out;
}

}  // namespace inkmetrics
