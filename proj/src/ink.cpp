#include "inkmetrics/ink.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

using nlohmann::json;

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw ParseError(field + ": " + message);
}

double number_at(const json& value, const std::string& field) {
  if (!value.is_number()) field_error(field, "expected a number");
  return value.get<double>();
}

}  // namespace

void validate(const InkSymbol& symbol) {
  if (symbol.strokes.empty()) throw ValidationError("symbol has no strokes");
  for (std::size_t i = 0; i < symbol.strokes.size(); ++i) {
    const auto& stroke = symbol.strokes[i];
    if (stroke.size() < 2) {
      throw ValidationError("stroke " + std::to_string(i) + " has " + std::to_string(stroke.size()) +
                            " point(s); at least 2 are required");
    }
    for (const auto& p : stroke) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ValidationError("stroke " + std::to_string(i) + " contains a non-finite coordinate");
      }
    }
  }
}

std::vector<InkSymbol> parse_ink(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_offset(document, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("symbols")) field_error("document", "missing \"symbols\" array");
  const auto& symbols = doc.at("symbols");
  if (!symbols.is_array()) field_error("symbols", "expected an array");

  std::vector<InkSymbol> out;
  out.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::string where = "symbols[" + std::to_string(i) + "]";
    const auto& entry = symbols[i];
    if (!entry.is_object()) field_error(where, "expected an object");

    InkSymbol symbol;
    if (auto it = entry.find("label"); it != entry.end() && !it->is_null()) {
      if (!it->is_string()) field_error(where + ".label", "expected a string or null");
      symbol.class_label = it->get<std::string>();
    }
    if (auto it = entry.find("source"); it != entry.end() && !it->is_null()) {
      if (!it->is_string()) field_error(where + ".source", "expected a string or null");
      symbol.source_id = it->get<std::string>();
    }
    if (auto it = entry.find("y_down"); it != entry.end()) {
      if (!it->is_boolean()) field_error(where + ".y_down", "expected a boolean");
      symbol.y_down = it->get<bool>();
    }
    auto strokes = entry.find("strokes");
    if (strokes == entry.end() || !strokes->is_array()) field_error(where + ".strokes", "expected an array");

    for (std::size_t k = 0; k < strokes->size(); ++k) {
      const std::string stroke_where = where + ".strokes[" + std::to_string(k) + "]";
      const auto& raw = (*strokes)[k];
      if (!raw.is_array()) field_error(stroke_where, "expected an array of points");
      Stroke stroke;
      stroke.reserve(raw.size());
      for (std::size_t p = 0; p < raw.size(); ++p) {
        const std::string point_where = stroke_where + "[" + std::to_string(p) + "]";
        const auto& pt = raw[p];
        if (!pt.is_array() || pt.size() != 2) field_error(point_where, "expected [x, y]");
        const double x = number_at(pt[0], point_where);
        const double y = number_at(pt[1], point_where);
        stroke.push_back({x, symbol.y_down ? -y : y});
      }
      symbol.strokes.push_back(std::move(stroke));
    }
    try {
      validate(symbol);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back(std::move(symbol));
  }
  return out;
}

std::string serialize_ink(std::span<const InkSymbol> symbols) {
  json list = json::array();
  for (const auto& symbol : symbols) {
    json strokes = json::array();
    for (const auto& stroke : symbol.strokes) {
      json pts = json::array();
      for (const auto& p : stroke) pts.push_back({p.x, symbol.y_down ? -p.y : p.y});
      strokes.push_back(std::move(pts));
    }
    json entry = {{"label", symbol.class_label ? json(*symbol.class_label) : json(nullptr)},
                  {"y_down", symbol.y_down},
                  {"strokes", std::move(strokes)}};
    if (symbol.source_id) entry["source"] = *symbol.source_id;
    list.push_back(std::move(entry));
  }
  return json{{"symbols", std::move(list)}}.dump(1) + "\n";
}

std::vector<Point> concatenate_strokes(const InkSymbol& symbol) {
  std::vector<Point> out;
  std::size_t total = 0;
  for (const auto& stroke : symbol.strokes) total += stroke.size();
  out.reserve(total);
  for (const auto& stroke : symbol.strokes) out.insert(out.end(), stroke.begin(), stroke.end());
  return out;
}

ParameterizedTrace parameterize(std::span<const Point> points) {
  ParameterizedTrace trace;
  if (points.empty()) throw DegenerateError("empty point sequence");

  std::vector<Point> kept;
  kept.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("non-finite coordinate");
    if (kept.empty() || !(p == kept.back())) kept.push_back(p);
  }
  if (kept.size() < 2) throw DegenerateError("all points coincide; trace has zero length");

  std::vector<double> cumulative(kept.size(), 0.0);
  for (std::size_t i = 1; i < kept.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + std::hypot(kept[i].x - kept[i - 1].x, kept[i].y - kept[i - 1].y);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw DegenerateError("trace has zero length");

  trace.total_length = total;
  trace.points.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    trace.points.push_back({cumulative[i] / total, kept[i].x, kept[i].y});
  }
  trace.points.back().s = 1.0;
  return trace;
}

ParameterizedTrace parameterize(const InkSymbol& symbol) {
  validate(symbol);
  const auto points = concatenate_strokes(symbol);
  return parameterize(points);
}

}  // namespace inkmetrics
