#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inkmetrics/detect.hpp"

namespace inkmetrics {

enum class Placement { kInline, kSuperscript, kSubscript };

std::string_view to_string(Placement placement);

struct JuxtapositionConfig {
  // Baseline raise (or drop) of the right symbol, in left reference heights.
  double offset_threshold = 0.4;
  // Right reference height over left reference height below which the right
  // symbol counts as reduced in size.
  double size_ratio_threshold = 0.85;
  // Margin at which confidence reaches tanh(1) ~ 0.76.
  double confidence_scale = 0.2;
};

struct PlacementJudgment {
  Placement relation = Placement::kInline;
  double confidence = 0.0;                // in [0, 1]
  std::optional<double> baseline_offset;  // (right - left baseline) / left reference height
  std::optional<double> size_ratio;
};

// Reads the right symbol relative to the left one. Reference heights are the
// x-height, else the cap height, else the ascender height. When either side
// lacks a baseline or a reference height the judgment is inline with
// confidence 0 and no evidence.
PlacementJudgment classify_juxtaposition(const MetricLines& left, const MetricLines& right,
                                         const JuxtapositionConfig& config = {});

struct NeatenGuide {
  double baseline = 0.0;
  double x_height = 1.0;
  // Targets for symbols measured by cap or ascender height. When absent those
  // symbols are scaled to x_height too.
  std::optional<double> cap_height;
  std::optional<double> ascender_height;
  // Script baselines sit this many guide x-heights above (below) the guide
  // baseline; script reference heights become script_size guide x-heights.
  double script_offset = 0.5;
  double script_size = 0.6;
};

// new page point = scale * old page point + (dx, dy)
struct SymbolPlacement {
  double scale = 1.0;
  double dx = 0.0;
  double dy = 0.0;
  Placement relation = Placement::kInline;
  bool unscaled = false;  // no usable height metric: translated only
};

struct NeatenPlan {
  NeatenGuide guide;
  std::vector<SymbolPlacement> symbols;
};

struct NeatenResult {
  std::vector<SymbolVector> symbols;
  std::vector<MetricLines> lines;  // the input lines mapped through each placement
  NeatenPlan plan;
};

// Scales each symbol uniformly so its reference height matches the guide and
// moves its baseline onto the guide baseline (scripts onto the raised or
// lowered script baseline). Symbols are laid out left to right in input
// order, starting at the first symbol's left edge, with every gap scaled by
// the mean scale of its two neighbours. Throws ValidationError when the
// inputs differ in length or a symbol has no baseline.
NeatenResult neaten(std::span<const SymbolVector> symbols, std::span<const MetricLines> lines,
                    const NeatenGuide& guide, const JuxtapositionConfig& config = {});

SymbolVector apply_placement(const SymbolVector& symbol, const SymbolPlacement& placement);
MetricLines apply_placement(const MetricLines& lines, const SymbolPlacement& placement);
// Moves the writer's own strokes; labels and orientation are kept.
InkSymbol apply_placement(const InkSymbol& ink, const SymbolPlacement& placement);

struct Extent {
  double min = 0.0;
  double max = 0.0;
};

// Exact ranges of the reconstructed curve in page coordinates.
Extent horizontal_extent(const SymbolVector& symbol);
Extent vertical_extent(const SymbolVector& symbol);

// The reconstructed curve in page coordinates as a single stroke of
// `points` samples, equally spaced in s.
InkSymbol to_ink(const SymbolVector& symbol, int points = 128);

// Side-by-side SVG of two lines of ink (before on top, after below), with
// the guide baseline and x line drawn under the second.
std::string render_svg(std::span<const InkSymbol> before, std::span<const InkSymbol> after, const NeatenGuide& guide);

}  // namespace inkmetrics
