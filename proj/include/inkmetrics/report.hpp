#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "inkmetrics/detect.hpp"

namespace inkmetrics {

struct DetectionReport {
  std::string class_id;
  std::optional<std::string> source_id;
  int steps = 1;
  std::vector<LocatedPoint> points;
  MetricLines lines;
  double reconstruction_error = 0.0;
  SymbolVector sample;  // the normalized projection the points were found on
};

// Projects the ink onto the catalog basis and runs the multi-step search
// against the model of the symbol's label (or `class_id` when given).
// Throws ValidationError for an unlabeled symbol and CatalogError
// (kUnknownClass) when the class is not in the catalog.
DetectionReport detect_ink(const Catalog& catalog, const InkSymbol& ink, int steps,
                           std::optional<std::string_view> class_id = std::nullopt);

// Schema:
//   { "class": str, "source": str|null, "steps": int, "reconstruction_error": num,
//     "points": [ { "s", "type", "kind", "x", "y", "boundary", "failed" } ],
//     "lines": { "<line type>": num|null, ... },
//     "heights": { "x_height", "ascender_height", "cap_height", "descender_depth": num|null },
//     "slant_deg": num, "width": num }
nlohmann::json report_to_json(const DetectionReport& report);
nlohmann::json metric_lines_to_json(const MetricLines& lines);

// {"reports": [...]} with a trailing newline. Doubles print as the shortest
// text that reads back to the same value.
std::string reports_to_json(std::span<const DetectionReport> reports);

}  // namespace inkmetrics
