#include "inkmetrics/applications.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::kInline:
      return "inline";
    case Placement::kSuperscript:
      return "superscript";
    case Placement::kSubscript:
      return "subscript";
  }
  return "inline";
}

PlacementJudgment classify_juxtaposition(const MetricLines& left, const MetricLines& right,
                                         const JuxtapositionConfig& config) {
  PlacementJudgment out;
  const auto lb = left.baseline(), rb = right.baseline();
  const auto lh = left.reference_height(), rh = right.reference_height();
  if (!lb || !rb || !lh || !rh || !(*lh > 0.0)) return out;

  const double offset = (*rb - *lb) / *lh;
  const double ratio = *rh / *lh;
  out.baseline_offset = offset;
  out.size_ratio = ratio;

  const double t = config.offset_threshold, r = config.size_ratio_threshold;
  double margin = 0.0;
  if (ratio < r && std::abs(offset) > t) {
    out.relation = offset > 0 ? Placement::kSuperscript : Placement::kSubscript;
    margin = std::min(std::abs(offset) - t, r - ratio);
  } else {
    // Distance from the point (offset, ratio) to the nearer script region.
    const double size_gap = std::max(0.0, ratio - r);
    const double to_sup = std::hypot(std::max(0.0, t - offset), size_gap);
    const double to_sub = std::hypot(std::max(0.0, offset + t), size_gap);
    margin = std::min(to_sup, to_sub);
  }
  out.confidence = std::clamp(std::tanh(margin / config.confidence_scale), 0.0, 1.0);
  return out;
}

Extent horizontal_extent(const SymbolVector& symbol) {
  const auto basis = shared_basis(symbol.basis());
  const LegendrePoly x = basis->combine(symbol.x());
  double lo = std::min(x.value(0.0), x.value(1.0)), hi = std::max(x.value(0.0), x.value(1.0));
  for (const auto& c : sign_changes([&x](double s) { return x.derivative(s); })) {
    lo = std::min(lo, x.value(c.s));
    hi = std::max(hi, x.value(c.s));
  }
  const auto& t = symbol.transform();
  return {t.tx + t.scale * lo, t.tx + t.scale * hi};
}

Extent vertical_extent(const SymbolVector& symbol) {
  const auto basis = shared_basis(symbol.basis());
  const LegendrePoly y = basis->combine(symbol.y());
  double lo = std::min(y.value(0.0), y.value(1.0)), hi = std::max(y.value(0.0), y.value(1.0));
  for (const auto& c : sign_changes([&y](double s) { return y.derivative(s); })) {
    lo = std::min(lo, y.value(c.s));
    hi = std::max(hi, y.value(c.s));
  }
  const auto& t = symbol.transform();
  return {t.ty + t.scale * lo, t.ty + t.scale * hi};
}

SymbolVector apply_placement(const SymbolVector& symbol, const SymbolPlacement& p) {
  SymbolVector out = symbol;
  const auto& t = symbol.transform();
  out.set_transform({p.scale * t.tx + p.dx, p.scale * t.ty + p.dy, p.scale * t.scale});
  return out;
}

MetricLines apply_placement(const MetricLines& lines, const SymbolPlacement& p) {
  MetricLines out = lines;
  for (auto& v : out.lines) {
    if (v) *v = p.scale * *v + p.dy;
  }
  for (auto* h : {&out.x_height, &out.ascender_height, &out.cap_height, &out.descender_depth}) {
    if (*h) **h *= p.scale;
  }
  out.width *= p.scale;
  return out;
}

InkSymbol apply_placement(const InkSymbol& ink, const SymbolPlacement& p) {
  InkSymbol out = ink;
  for (auto& stroke : out.strokes) {
    for (auto& pt : stroke) pt = {p.scale * pt.x + p.dx, p.scale * pt.y + p.dy};
  }
  return out;
}

namespace {

// Target for whichever height reference_height() picked.
double target_height(const MetricLines& lines, const NeatenGuide& guide) {
  if (lines.x_height) return guide.x_height;
  if (lines.cap_height) return guide.cap_height.value_or(guide.x_height);
  return guide.ascender_height.value_or(guide.x_height);
}

}  // namespace

NeatenResult neaten(std::span<const SymbolVector> symbols, std::span<const MetricLines> lines,
                    const NeatenGuide& guide, const JuxtapositionConfig& config) {
  if (symbols.size() != lines.size()) throw ValidationError("neaten needs one set of metric lines per symbol");
  if (!(guide.x_height > 0.0)) throw ValidationError("guide x-height must be positive");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].baseline()) throw ValidationError("symbol " + std::to_string(i) + " has no baseline");
  }

  NeatenResult out;
  out.plan.guide = guide;
  std::size_t base = 0;
  double previous_right = 0.0, previous_scale = 1.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    SymbolPlacement p;
    if (i > 0) {
      p.relation = classify_juxtaposition(lines[base], lines[i], config).relation;
      if (p.relation == Placement::kInline) base = i;
    }
    const bool script = p.relation != Placement::kInline;

    const auto height = lines[i].reference_height();
    if (height && *height > 0.0) {
      p.scale = target_height(lines[i], guide) * (script ? guide.script_size : 1.0) / *height;
    } else {
      p.unscaled = true;
    }

    double target_baseline = guide.baseline;
    if (p.relation == Placement::kSuperscript) target_baseline += guide.script_offset * guide.x_height;
    if (p.relation == Placement::kSubscript) target_baseline -= guide.script_offset * guide.x_height;
    p.dy = target_baseline - p.scale * *lines[i].baseline();

    const Extent x = horizontal_extent(symbols[i]);
    double left = x.min;
    if (i > 0) {
      const Extent before = horizontal_extent(symbols[i - 1]);
      left = previous_right + (x.min - before.max) * 0.5 * (previous_scale + p.scale);
    }
    p.dx = left - p.scale * x.min;
    previous_right = left + p.scale * (x.max - x.min);
    previous_scale = p.scale;

    out.symbols.push_back(apply_placement(symbols[i], p));
    out.lines.push_back(apply_placement(lines[i], p));
    out.plan.symbols.push_back(p);
  }
  return out;
}

InkSymbol to_ink(const SymbolVector& symbol, int points) {
  if (points < 2) throw DomainError("need at least two points per symbol");
  const auto basis = shared_basis(symbol.basis());
  const Curve curve = symbol.normalized_curve(*basis);
  Stroke stroke;
  stroke.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    stroke.push_back(symbol.transform().apply(curve.at(static_cast<double>(i) / (points - 1))));
  }
  InkSymbol out;
  out.strokes.push_back(std::move(stroke));
  out.class_label = symbol.class_label();
  return out;
}

namespace {

struct Box {
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  void add(Point p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
};

Box bounds(std::span<const InkSymbol> ink) {
  Box b;
  for (const auto& sym : ink) {
    for (const auto& stroke : sym.strokes) {
      for (const auto& p : stroke) b.add(p);
    }
  }
  return b;
}

}  // namespace

std::string render_svg(std::span<const InkSymbol> before, std::span<const InkSymbol> after, const NeatenGuide& guide) {
  constexpr double kWidth = 800.0, kPad = 20.0;
  Box all = bounds(before);
  const Box second = bounds(after);
  all.add({second.x0, second.y0});
  all.add({second.x1, second.y1});
  all.add({second.x0, guide.baseline});
  all.add({second.x0, guide.baseline + guide.x_height});
  if (!std::isfinite(all.x0)) all = {0, 0, 1, 1};
  const double span_x = std::max(all.x1 - all.x0, 1e-9), span_y = std::max(all.y1 - all.y0, 1e-9);
  const double unit = (kWidth - 2 * kPad) / span_x;
  const double row = span_y * unit + 2 * kPad;

  std::string svg;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                kWidth, 2 * row, kWidth, 2 * row);
  svg += buf;
  // y up on the page, y down in SVG; row 0 is "before", row 1 "after".
  const auto map = [&](Point p, int r) {
    return Point{kPad + (p.x - all.x0) * unit, r * row + kPad + (all.y1 - p.y) * unit};
  };
  for (double level : {guide.baseline, guide.baseline + guide.x_height}) {
    const Point a = map({all.x0, level}, 1), b = map({all.x1, level}, 1);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#9ab\" stroke-dasharray=\"4 3\"/>\n",
                  a.x, a.y, b.x, b.y);
    svg += buf;
  }
  const auto draw = [&](std::span<const InkSymbol> ink, int r) {
    for (const auto& sym : ink) {
      for (const auto& stroke : sym.strokes) {
        svg += "<polyline fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : stroke) {
          const Point q = map(p, r);
          std::snprintf(buf, sizeof buf, "%.2f,%.2f ", q.x, q.y);
          svg += buf;
        }
        svg += "\"/>\n";
      }
    }
  };
  draw(before, 0);
  draw(after, 1);
  svg += "</svg>\n";
  return svg;
}

}  // namespace inkmetrics
