#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/juxtaposition.hpp"
#include "inkmetrics/applications.hpp"
#include "inkmetrics/error.hpp"
#include "inkmetrics/synthetic.hpp"

using namespace inkmetrics;

namespace {

MetricLines simple_lines(double baseline, double x_height) {
  MetricLines m;
  m.lines[static_cast<std::size_t>(LineType::kBaseline)] = baseline;
  m.lines[static_cast<std::size_t>(LineType::kXLine)] = baseline + x_height;
  m.x_height = x_height;
  return m;
}

const AnnotatedModel& model(const std::string& id) {
  static const Catalog catalog = builtin_catalog();
  return *catalog.find(id);
}

SymbolVector placed(const SymbolVector& v, double scale, double dx, double dy) {
  return apply_placement(v, SymbolPlacement{scale, dx, dy});
}

MetricLines detect_lines(const AnnotatedModel& m, const SymbolVector& v) {
  return metric_lines(v, locate_multistep(m, v, 3), m.slant_deg);
}

struct Line {
  std::vector<const AnnotatedModel*> models;
  std::vector<SymbolVector> symbols;
  std::vector<MetricLines> lines;
};

// Catalog averages (with a little shape noise) written at uneven sizes and
// heights along a line.
Line uneven_line(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> size(0.8, 1.25), lift(-0.1, 0.1), gap(0.1, 0.4);
  Line line;
  double cursor = 0.0;
  int k = 0;
  for (const char* id : {"h", "a", "n", "o", "u", "m", "r"}) {
    const auto& m = model(id);
    const auto shape = fixture::perturbed(m.average, 0.005, seed * 31 + k++);
    const double scale = size(rng);
    const Extent x = horizontal_extent(placed(shape, scale, 0.0, 0.0));
    const auto v = placed(shape, scale, cursor - x.min, lift(rng));
    cursor += (x.max - x.min) + gap(rng);
    line.models.push_back(&m);
    line.symbols.push_back(v);
    line.lines.push_back(detect_lines(m, v));
  }
  return line;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TEST(Juxtaposition, IdenticalMetricsAreInline) {
  const auto m = simple_lines(0.0, 1.0);
  const auto j = classify_juxtaposition(m, m);
  EXPECT_EQ(j.relation, Placement::kInline);
  EXPECT_DOUBLE_EQ(*j.baseline_offset, 0.0);
  EXPECT_DOUBLE_EQ(*j.size_ratio, 1.0);
  // Nearest script region corner is (0.4, 0.85): distance hypot(0.4, 0.15).
  EXPECT_NEAR(j.confidence, std::tanh(std::hypot(0.4, 0.15) / 0.2), 1e-12);
}

TEST(Juxtaposition, RaisedAndSmallerIsSuperscript) {
  const auto S = simple_lines(0.0, 1.0);
  const auto two = simple_lines(0.8, 0.6);
  const auto j = classify_juxtaposition(S, two);
  EXPECT_EQ(j.relation, Placement::kSuperscript);
  EXPECT_NEAR(*j.baseline_offset, 0.8, 1e-12);
  EXPECT_NEAR(j.confidence, std::tanh(std::min(0.8 - 0.4, 0.85 - 0.6) / 0.2), 1e-12);
}

TEST(Juxtaposition, DroppedAndSmallerIsSubscript) {
  const auto j = classify_juxtaposition(simple_lines(0.0, 1.0), simple_lines(-0.7, 0.6));
  EXPECT_EQ(j.relation, Placement::kSubscript);
  EXPECT_GT(j.confidence, 0.0);
}

TEST(Juxtaposition, FullSizeRaisedStaysInline) {
  const auto j = classify_juxtaposition(simple_lines(0.0, 1.0), simple_lines(0.8, 1.0));
  EXPECT_EQ(j.relation, Placement::kInline);
}

TEST(Juxtaposition, ConfidenceVanishesOnTheDecisionBoundary) {
  const auto j = classify_juxtaposition(simple_lines(0.0, 1.0), simple_lines(0.4, 0.6));
  EXPECT_EQ(j.relation, Placement::kInline);
  EXPECT_NEAR(j.confidence, 0.0, 1e-12);
}

TEST(Juxtaposition, MissingBaselineIsIndeterminate) {
  MetricLines none;
  none.x_height = 1.0;
  for (const auto& j : {classify_juxtaposition(none, simple_lines(0, 1)), classify_juxtaposition(simple_lines(0, 1), none)}) {
    EXPECT_EQ(j.relation, Placement::kInline);
    EXPECT_EQ(j.confidence, 0.0);
    EXPECT_FALSE(j.baseline_offset.has_value());
  }
}

TEST(Juxtaposition, ThresholdsComeFromConfig) {
  JuxtapositionConfig loose;
  loose.offset_threshold = 0.1;
  loose.size_ratio_threshold = 0.95;
  const auto left = simple_lines(0.0, 1.0), right = simple_lines(0.2, 0.9);
  EXPECT_EQ(classify_juxtaposition(left, right).relation, Placement::kInline);
  EXPECT_EQ(classify_juxtaposition(left, right, loose).relation, Placement::kSuperscript);
}

TEST(Juxtaposition, InvariantUnderJointTranslationAndScale) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> base(-1, 1), height(0.3, 1.5), k(0.2, 5), d(-50, 50);
  for (int i = 0; i < 200; ++i) {
    const auto a = simple_lines(base(rng), height(rng)), b = simple_lines(base(rng), height(rng));
    const SymbolPlacement p{k(rng), d(rng), d(rng)};
    const auto j1 = classify_juxtaposition(a, b);
    const auto j2 = classify_juxtaposition(apply_placement(a, p), apply_placement(b, p));
    EXPECT_EQ(j1.relation, j2.relation);
    EXPECT_NEAR(j1.confidence, j2.confidence, 1e-9);
  }
}

TEST(Juxtaposition, FourCanonicalPairsAllCorrect) {
  int correct = 0;
  for (const auto& c : fixture::juxtaposition_cases()) {
    const auto j = classify_juxtaposition(c.left.lines, c.right.lines);
    EXPECT_EQ(j.relation, c.expected) << c.name;
    correct += j.relation == c.expected;
  }
  EXPECT_EQ(correct, 4);
}

TEST(Juxtaposition, BoundingBoxBaselinesFallIntoTheTrap) {
  for (const auto& c : fixture::juxtaposition_cases()) {
    const auto j = classify_juxtaposition(fixture::box_lines(c.left), fixture::box_lines(c.right));
    EXPECT_EQ(j.relation != c.expected, c.box_trap) << c.name;
  }
}

TEST(Juxtaposition, DetectedLinesOnCatalogGlyphs) {
  const auto& p = model("p");
  const auto& q = model("q");
  const auto left = detect_lines(p, p.average);
  // q written at 60% size with its baseline 0.5 x-heights below p's.
  const auto sub = placed(q.average, 0.6, 1.0, *left.baseline() - 0.5 * *left.x_height);
  EXPECT_EQ(classify_juxtaposition(left, detect_lines(q, sub)).relation, Placement::kSubscript);
  const auto beside = placed(q.average, 1.0, 1.0, 0.0);
  EXPECT_EQ(classify_juxtaposition(left, detect_lines(q, beside)).relation, Placement::kInline);
}

TEST(Neaten, AlignedLineIsUnchanged) {
  const auto& u = model("u");
  const auto lu = detect_lines(u, u.average);
  NeatenGuide guide;
  guide.baseline = *lu.baseline();
  guide.x_height = *lu.x_height;
  const auto second = placed(u.average, 1.0, 1.0, 0.0);
  const std::vector<SymbolVector> symbols{u.average, second};
  const std::vector<MetricLines> lines{lu, detect_lines(u, second)};
  const auto r = neaten(symbols, lines, guide);
  for (const auto& p : r.plan.symbols) {
    EXPECT_NEAR(p.scale, 1.0, 1e-12);
    EXPECT_NEAR(p.dx, 0.0, 1e-12);
    EXPECT_NEAR(p.dy, 0.0, 1e-12);
  }
}

TEST(Neaten, SecondBaselineTranslatedOntoGuide) {
  const auto& n = model("n");
  const auto a = placed(n.average, 1.0, 0.0, -*detect_lines(n, n.average).baseline());
  const auto b = placed(a, 1.0, 1.0, 3.0);
  const std::vector<SymbolVector> symbols{a, b};
  const std::vector<MetricLines> lines{detect_lines(n, a), detect_lines(n, b)};
  NeatenGuide guide;
  guide.x_height = *lines[0].x_height;
  const auto r = neaten(symbols, lines, guide);
  EXPECT_NEAR(r.plan.symbols[1].dy, -3.0, 1e-9);
  EXPECT_NEAR(*detect_lines(n, r.symbols[0]).baseline(), *detect_lines(n, r.symbols[1]).baseline(), 1e-9);
}

TEST(Neaten, UnevenLineAlignsOnRedetection) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto line = uneven_line(seed);
    NeatenGuide guide;
    guide.baseline = 2.0;
    guide.x_height = 1.5;
    const auto r = neaten(line.symbols, line.lines, guide);
    std::vector<double> bases, xlines;
    for (std::size_t i = 0; i < r.symbols.size(); ++i) {
      EXPECT_EQ(r.plan.symbols[i].relation, Placement::kInline);
      const auto again = detect_lines(*line.models[i], r.symbols[i]);
      bases.push_back(*again.baseline());
      xlines.push_back(*again.line(LineType::kXLine));
    }
    EXPECT_LT(spread(bases), 0.01 * guide.x_height);
    EXPECT_LT(spread(xlines), 0.05 * guide.x_height);
    EXPECT_NEAR(bases.front(), guide.baseline, 1e-9);
  }
}

TEST(Neaten, Idempotent) {
  const auto line = uneven_line(9);
  NeatenGuide guide;
  guide.x_height = 1.2;
  const auto once = neaten(line.symbols, line.lines, guide);
  std::vector<MetricLines> again;
  for (std::size_t i = 0; i < once.symbols.size(); ++i) again.push_back(detect_lines(*line.models[i], once.symbols[i]));
  const auto twice = neaten(once.symbols, again, guide);
  for (const auto& p : twice.plan.symbols) {
    EXPECT_NEAR(p.scale, 1.0, 1e-6);
    EXPECT_NEAR(p.dx, 0.0, 1e-6);
    EXPECT_NEAR(p.dy, 0.0, 1e-6);
  }
}

TEST(Neaten, ShapeIsPreservedExactly) {
  const auto line = uneven_line(5);
  const auto r = neaten(line.symbols, line.lines, NeatenGuide{});
  for (std::size_t i = 0; i < r.symbols.size(); ++i) {
    const auto before = line.symbols[i].denormalize(), after = r.symbols[i].denormalize();
    const auto& p = r.plan.symbols[i];
    EXPECT_GT(p.scale, 0.0);
    EXPECT_TRUE(std::equal(line.symbols[i].coeffs().begin(), line.symbols[i].coeffs().end(),
                           r.symbols[i].coeffs().begin()));
    for (std::size_t k = 0; k < before.x.size(); ++k) {
      const double shift_x = k == 0 ? p.dx : 0.0, shift_y = k == 0 ? p.dy : 0.0;
      EXPECT_NEAR(after.x[k], p.scale * before.x[k] + shift_x, 1e-12 * (1 + std::abs(after.x[k])));
      EXPECT_NEAR(after.y[k], p.scale * before.y[k] + shift_y, 1e-12 * (1 + std::abs(after.y[k])));
    }
  }
}

TEST(Neaten, GapsScaleWithTheSymbols) {
  const auto& o = model("o");
  const auto lo = detect_lines(o, o.average);
  const auto a = o.average;
  const double width = horizontal_extent(a).max - horizontal_extent(a).min;
  const auto b = placed(a, 1.0, width + 0.3, 0.0);
  NeatenGuide guide;
  guide.baseline = *lo.baseline();
  guide.x_height = 2.0 * *lo.x_height;
  const std::vector<SymbolVector> symbols{a, b};
  const std::vector<MetricLines> lines{lo, detect_lines(o, b)};
  const auto r = neaten(symbols, lines, guide);
  const double gap = horizontal_extent(r.symbols[1]).min - horizontal_extent(r.symbols[0]).max;
  EXPECT_NEAR(gap, 0.6, 1e-9);
  EXPECT_NEAR(horizontal_extent(r.symbols[0]).min, horizontal_extent(a).min, 1e-9);
}

TEST(Neaten, ScriptsKeepTheirRaiseScaledToTheGuide) {
  const auto& n = model("n");
  const auto base = n.average;
  const auto lb = detect_lines(n, base);
  const double width = horizontal_extent(base).max - horizontal_extent(base).min;
  const auto sup = placed(base, 0.55, width + 0.1, *lb.baseline() + 0.7 * *lb.x_height);
  const std::vector<SymbolVector> symbols{base, sup};
  const std::vector<MetricLines> lines{lb, detect_lines(n, sup)};
  NeatenGuide guide;
  guide.x_height = 1.0;
  const auto r = neaten(symbols, lines, guide);
  ASSERT_EQ(r.plan.symbols[1].relation, Placement::kSuperscript);
  const auto after = detect_lines(n, r.symbols[1]);
  EXPECT_NEAR(*after.baseline(), guide.baseline + guide.script_offset * guide.x_height, 1e-9);
  EXPECT_NEAR(*after.x_height, guide.script_size * guide.x_height, 1e-9);
}

TEST(Neaten, NoHeightMeansTranslatedOnlyAndFlagged) {
  const auto& u = model("u");
  auto lines = detect_lines(u, u.average);
  MetricLines bare;
  bare.lines[static_cast<std::size_t>(LineType::kBaseline)] = lines.baseline();
  const std::vector<SymbolVector> symbols{u.average};
  const std::vector<MetricLines> ls{bare};
  NeatenGuide guide;
  guide.baseline = -4.0;
  const auto r = neaten(symbols, ls, guide);
  EXPECT_TRUE(r.plan.symbols[0].unscaled);
  EXPECT_EQ(r.plan.symbols[0].scale, 1.0);
  EXPECT_NEAR(r.lines[0].baseline().value(), -4.0, 1e-12);
}

TEST(Neaten, RejectsMissingBaselineAndMismatchedInput) {
  const auto& u = model("u");
  const std::vector<SymbolVector> symbols{u.average};
  const std::vector<MetricLines> none{MetricLines{}};
  EXPECT_THROW(neaten(symbols, none, NeatenGuide{}), ValidationError);
  EXPECT_THROW(neaten(symbols, std::vector<MetricLines>{}, NeatenGuide{}), ValidationError);
}

TEST(Output, InkSamplesTheCurveInPageCoordinates) {
  const auto& h = model("h");
  const auto v = placed(h.average, 3.0, 10.0, -2.0);
  const auto ink = to_ink(v);
  ASSERT_EQ(ink.strokes.size(), 1u);
  ASSERT_EQ(ink.strokes[0].size(), 128u);
  const auto curve = v.denormalize();
  const auto basis = shared_basis(v.basis());
  for (double s : {0.0, 1.0}) {
    const Point expected = evaluate(curve, *basis, s);
    const Point got = ink.strokes[0][s == 0.0 ? 0 : 127];
    EXPECT_NEAR(got.x, expected.x, 1e-9);
    EXPECT_NEAR(got.y, expected.y, 1e-9);
  }
  EXPECT_EQ(to_ink(v, 16).strokes[0].size(), 16u);
  EXPECT_THROW(to_ink(v, 1), DomainError);
}

TEST(Output, SvgHasOnePolylinePerStroke) {
  const auto line = uneven_line(2);
  const auto r = neaten(line.symbols, line.lines, NeatenGuide{});
  std::vector<InkSymbol> before, after;
  for (const auto& s : line.symbols) before.push_back(to_ink(s));
  for (const auto& s : r.symbols) after.push_back(to_ink(s));
  const auto svg = render_svg(before, after, NeatenGuide{});
  std::size_t count = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, before.size() + after.size());
  EXPECT_EQ(svg.rfind("</svg>"), svg.size() - 7);
}
