#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace inkmetrics {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Stroke = std::vector<Point>;

// One handwritten symbol as captured. Coordinates are stored in the canonical
// y-up frame; `y_down` remembers the orientation of the source so output can
// be written back the same way.
struct InkSymbol {
  std::vector<Stroke> strokes;
  std::optional<std::string> class_label;
  std::optional<std::string> source_id;
  bool y_down = false;

  friend bool operator==(const InkSymbol&, const InkSymbol&) = default;
};

struct TracePoint {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Polyline parameterized by normalized cumulative chord length; s runs
// from exactly 0 to exactly 1 and is strictly increasing.
struct ParameterizedTrace {
  std::vector<TracePoint> points;
  double total_length = 0.0;
};

// Throws ValidationError if the symbol has no strokes, a stroke with fewer
// than two points, or a non-finite coordinate.
void validate(const InkSymbol& symbol);

// Parses the JSON ink interchange document. Points with "y_down": true are
// flipped into the y-up frame on input.
std::vector<InkSymbol> parse_ink(std::string_view document);
std::string serialize_ink(std::span<const InkSymbol> symbols);

std::vector<Point> concatenate_strokes(const InkSymbol& symbol);

ParameterizedTrace parameterize(std::span<const Point> points);

// Convenience: validate, concatenate and parameterize.
ParameterizedTrace parameterize(const InkSymbol& symbol);

}  // namespace inkmetrics
