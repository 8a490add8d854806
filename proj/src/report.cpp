#include "inkmetrics/report.hpp"

#include "inkmetrics/error.hpp"

namespace inkmetrics {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

DetectionReport detect_ink(const Catalog& catalog, const InkSymbol& ink, int steps,
                           std::optional<std::string_view> class_id) {
  if (steps < 1) throw ValidationError("step count must be >= 1");
  const std::string id = class_id ? std::string(*class_id) : ink.class_label.value_or("");
  if (id.empty()) throw ValidationError("symbol has no label and no class was given");
  const AnnotatedModel* model = catalog.find(id);
  if (!model) throw CatalogError(CatalogError::Code::kUnknownClass, "class '" + id + "' is not in the catalog");

  const auto basis = shared_basis(catalog.basis);
  const auto trace = parameterize(ink);
  const auto series = project(trace, *basis);
  const SymbolVector sample = normalize(series, id);

  DetectionReport out;
  out.class_id = id;
  out.source_id = ink.source_id;
  out.steps = steps;
  out.points = locate_multistep(*model, sample, steps);
  out.lines = metric_lines(sample, out.points, model->slant_deg);
  out.reconstruction_error = reconstruction_error(trace, series, *basis);
  out.sample = sample;
  return out;
}

json metric_lines_to_json(const MetricLines& lines) {
  json by_type = json::object();
  for (auto t : kAllLineTypes) by_type[std::string(to_string(t))] = optional_number(lines.line(t));
  return {{"lines", by_type},
          {"heights",
           {{"x_height", optional_number(lines.x_height)},
            {"ascender_height", optional_number(lines.ascender_height)},
            {"cap_height", optional_number(lines.cap_height)},
            {"descender_depth", optional_number(lines.descender_depth)}}},
          {"slant_deg", lines.slant_deg},
          {"width", lines.width}};
}

json report_to_json(const DetectionReport& report) {
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"s", p.s},
                      {"type", to_string(p.line_type)},
                      {"kind", to_string(p.kind)},
                      {"x", p.position.x},
                      {"y", p.position.y},
                      {"boundary", p.boundary},
                      {"failed", p.failed}});
  }
  json out = {{"class", report.class_id},
              {"source", report.source_id ? json(*report.source_id) : json(nullptr)},
              {"steps", report.steps},
              {"reconstruction_error", report.reconstruction_error},
              {"points", std::move(points)}};
  out.update(metric_lines_to_json(report.lines));
  return out;
}

std::string reports_to_json(std::span<const DetectionReport> reports) {
  json list = json::array();
  for (const auto& r : reports) list.push_back(report_to_json(r));
  return json{{"reports", std::move(list)}}.dump(2) + "\n";
}

}  // namespace inkmetrics
