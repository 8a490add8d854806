#include "inkmetrics/service.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "inkmetrics/detect.hpp"
#include "inkmetrics/error.hpp"
#include "inkmetrics/report.hpp"

namespace inkmetrics {

using nlohmann::json;

double nearest_parameter(const SymbolVector& symbol, Point page, int samples) {
  if (samples < 2) throw DomainError("need at least two samples");
  const auto basis = shared_basis(symbol.basis());
  const Curve curve = symbol.normalized_curve(*basis);
  const auto dist2 = [&](double s) {
    const Point p = symbol.transform().apply(curve.at(s));
    return (p.x - page.x) * (p.x - page.x) + (p.y - page.y) * (p.y - page.y);
  };
  int best = 0;
  double best_d = INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double d = dist2(static_cast<double>(i) / (samples - 1));
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double a = static_cast<double>(std::max(best - 1, 0)) / (samples - 1);
  double b = static_cast<double>(std::min(best + 1, samples - 1)) / (samples - 1);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = dist2(c), fd = dist2(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = dist2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = dist2(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double grid = static_cast<double>(best) / (samples - 1);
  return dist2(refined) <= dist2(grid) ? refined : grid;
}

namespace {

ServiceResponse ok(const json& body) { return {200, body.dump()}; }

ServiceResponse failure(int status, std::string_view code, std::string_view message) {
  return {status, json{{"error", code}, {"message", message}}.dump()};
}

ServiceResponse unknown_class(std::string_view id) {
  return failure(404, "unknown_class", "class '" + std::string(id) + "' is not in the catalog");
}

json located_json(const std::vector<LocatedPoint>& points) {
  json out = json::array();
  for (const auto& p : points) {
    out.push_back({{"s", p.s},
                   {"type", to_string(p.line_type)},
                   {"kind", to_string(p.kind)},
                   {"x", p.position.x},
                   {"y", p.position.y},
                   {"boundary", p.boundary},
                   {"failed", p.failed}});
  }
  return out;
}

// The model as the tool shows it: annotations at their page positions plus
// the metric lines and slanted width they imply.
json model_json(const AnnotatedModel& m, std::uint64_t revision) {
  std::vector<LocatedPoint> located;
  if (!m.annotations.empty()) located = locate_determining_points(m, m.average);
  json out = {{"class", m.class_id},
              {"revision", revision},
              {"sample_count", m.sample_count},
              {"annotations", located_json(located)}};
  out.update(metric_lines_to_json(metric_lines(m.average, located, m.slant_deg)));
  return out;
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("request body is not JSON: ") + e.what());
  }
}

double number_field(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || !it->is_number()) throw ValidationError(std::string("'") + name + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string("'") + name + "' must be finite");
  return v;
}

ExtremumKind kind_field(const json& body) {
  const auto it = body.find("kind");
  if (it == body.end() || !it->is_string()) throw ValidationError("'kind' must be \"min\" or \"max\"");
  const auto kind = parse_extremum_kind(it->get<std::string>());
  if (!kind) throw ValidationError("'kind' must be \"min\" or \"max\"");
  return *kind;
}

// Runs a handler body, mapping library errors to HTTP statuses.
template <class F>
ServiceResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return failure(400, "bad_request", e.what());
  } catch (const ValidationError& e) {
    return failure(400, "invalid", e.what());
  } catch (const DomainError& e) {
    return failure(400, "invalid", e.what());
  } catch (const json::exception& e) {
    return failure(400, "bad_request", e.what());
  } catch (const CatalogError& e) {
    if (e.code() == CatalogError::Code::kUnknownClass) return failure(404, "unknown_class", e.what());
    return failure(500, "catalog", e.what());
  } catch (const std::exception& e) {
    return failure(500, "internal", e.what());
  }
}

}  // namespace

AnnotationService::AnnotationService(Catalog catalog, std::filesystem::path persist_to)
    : persist_to_(std::move(persist_to)) {
  for (const auto& m : catalog.models) validate(m, catalog.basis);
  for (const auto& m : catalog.models) revisions_.emplace(m.class_id, 0);
  catalog_ = std::make_shared<const Catalog>(std::move(catalog));
}

std::unique_ptr<AnnotationService> AnnotationService::open(const std::filesystem::path& catalog_path) {
  return std::make_unique<AnnotationService>(load_catalog(catalog_path), catalog_path);
}

std::shared_ptr<const Catalog> AnnotationService::snapshot() const {
  std::shared_lock lock(snapshot_mutex_);
  return catalog_;
}

std::uint64_t AnnotationService::revision(std::string_view class_id) const {
  std::shared_lock lock(snapshot_mutex_);
  const auto it = revisions_.find(class_id);
  return it == revisions_.end() ? 0 : it->second;
}

ServiceResponse AnnotationService::list_classes() const {
  const auto catalog = snapshot();
  json classes = json::array();
  for (const auto& m : catalog->models) {
    classes.push_back({{"id", m.class_id},
                       {"annotations", m.annotations.size()},
                       {"slant_deg", m.slant_deg},
                       {"revision", revision(m.class_id)}});
  }
  return ok({{"basis", {{"degree", catalog->basis.degree}, {"mu", catalog->basis.mu}}}, {"classes", classes}});
}

ServiceResponse AnnotationService::curve(std::string_view class_id, std::optional<std::string_view> samples) const {
  return guarded([&] {
    const auto catalog = snapshot();
    const AnnotatedModel* m = catalog->find(class_id);
    if (!m) return unknown_class(class_id);
    int n = 256;
    if (samples) {
      const auto r = std::from_chars(samples->data(), samples->data() + samples->size(), n);
      if (r.ec != std::errc() || r.ptr != samples->data() + samples->size() || n < 2 || n > 100000) {
        throw ValidationError("samples must be an integer in [2, 100000]");
      }
    }
    const auto basis = shared_basis(m->average.basis());
    const Curve c = m->average.normalized_curve(*basis);
    json points = json::array();
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / (n - 1);
      const Point p = m->average.transform().apply(c.at(s));
      points.push_back({s, p.x, p.y});
    }
    json out = model_json(*m, revision(class_id));
    out["points"] = std::move(points);
    return ok(out);
  });
}

ServiceResponse AnnotationService::snap(std::string_view class_id, std::string_view body) const {
  return guarded([&] {
    const auto catalog = snapshot();
    const AnnotatedModel* m = catalog->find(class_id);
    if (!m) return unknown_class(class_id);
    const json request = parse_body(body);
    if (!request.is_object()) throw ValidationError("request must be an object");
    const ExtremumKind kind = kind_field(request);

    double guess = 0.0;
    if (const auto it = request.find("point"); it != request.end()) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw ValidationError("'point' must be [x, y]");
      }
      guess = nearest_parameter(m->average, {(*it)[0].get<double>(), (*it)[1].get<double>()});
    } else {
      guess = number_field(request, "s_guess");
      if (guess < 0.0 || guess > 1.0) throw ValidationError("'s_guess' must lie in [0, 1]");
    }

    const auto basis = shared_basis(m->average.basis());
    const Curve c = m->average.normalized_curve(*basis);
    try {
      const SnapResult r = snap_to_extremum(c.y, guess, kind);
      const Point p = m->average.transform().apply(c.at(r.s));
      return ok({{"s", r.s},
                 {"x", p.x},
                 {"y", p.y},
                 {"kind", to_string(kind)},
                 {"boundary", r.boundary},
                 {"s_guess", guess}});
    } catch (const ExtremumNotFound& e) {
      json nearest = nullptr;
      if (e.nearest()) {
        nearest = {{"s", e.nearest()->s}, {"kind", to_string(e.nearest()->kind)}, {"boundary", e.nearest()->boundary}};
      }
      return ServiceResponse{422, json{{"error", "not_found"}, {"message", e.what()}, {"nearest", nearest}}.dump()};
    }
  });
}

ServiceResponse AnnotationService::save_annotations(std::string_view class_id, std::string_view body) {
  return guarded([&] {
    const json request = parse_body(body);
    if (!request.is_object()) throw ValidationError("request must be an object");
    const auto list = request.find("annotations");
    if (list == request.end() || !list->is_array()) throw ValidationError("'annotations' must be an array");
    std::vector<DeterminingPointSpec> annotations;
    for (std::size_t i = 0; i < list->size(); ++i) {
      const json& a = (*list)[i];
      const std::string where = "annotations[" + std::to_string(i) + "]";
      if (!a.is_object()) throw ValidationError(where + " must be an object");
      const double s = number_field(a, "s");
      if (s < 0.0 || s > 1.0) throw ValidationError(where + ".s must lie in [0, 1]");
      const auto type_it = a.find("type");
      const auto type = type_it != a.end() && type_it->is_string() ? parse_line_type(type_it->get<std::string>())
                                                                   : std::nullopt;
      if (!type) throw ValidationError(where + ".type is not a metric line");
      annotations.push_back({s, *type, kind_field(a)});
    }
    double slant = 0.0;
    if (request.contains("slant_deg")) slant = number_field(request, "slant_deg");
    if (!(std::abs(slant) < 90.0)) throw ValidationError("'slant_deg' must lie in (-90, 90)");
    std::optional<std::uint64_t> expected;
    if (const auto it = request.find("revision"); it != request.end() && !it->is_null()) {
      if (!it->is_number_unsigned()) throw ValidationError("'revision' must be a non-negative integer");
      expected = it->get<std::uint64_t>();
    }

    std::lock_guard writer(write_mutex_);
    const auto current = snapshot();
    if (!current->find(class_id)) return unknown_class(class_id);
    const std::uint64_t now = revision(class_id);
    if (expected && *expected != now) {
      return ServiceResponse{409, json{{"error", "conflict"},
                                       {"message", "class was saved by someone else; reload and retry"},
                                       {"revision", now}}
                                      .dump()};
    }
    auto next = std::make_shared<Catalog>(*current);
    AnnotatedModel& m = *next->find(class_id);
    m.annotations = std::move(annotations);
    m.slant_deg = slant;
    validate(m, next->basis);
    if (!persist_to_.empty()) save_catalog(*next, persist_to_);
    {
      std::unique_lock lock(snapshot_mutex_);
      catalog_ = next;
      revisions_[std::string(class_id)] = now + 1;
    }
    return ok(model_json(m, now + 1));
  });
}

ServiceResponse AnnotationService::preview(std::string_view class_id, std::string_view body) const {
  return guarded([&] {
    const auto catalog = snapshot();
    if (!catalog->find(class_id)) return unknown_class(class_id);
    const json request = parse_body(body);
    if (!request.is_object() || !request.contains("ink")) throw ValidationError("request needs an 'ink' document");
    int steps = 3;
    if (const auto it = request.find("steps"); it != request.end()) {
      if (!it->is_number_integer() || it->get<int>() < 1) throw ValidationError("'steps' must be an integer >= 1");
      steps = it->get<int>();
    }
    const json& ink = request["ink"];
    const auto symbols = parse_ink(ink.is_string() ? ink.get<std::string>() : ink.dump());
    std::vector<DetectionReport> reports;
    for (const auto& sym : symbols) reports.push_back(detect_ink(*catalog, sym, steps, class_id));
    json list = json::array();
    for (const auto& r : reports) list.push_back(report_to_json(r));
    return ok({{"reports", list}});
  });
}

void AnnotationService::mount(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir) {
  const auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get("/classes", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, list_classes()); });
  server.Get(R"(/classes/([^/]+)/curve)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> samples;
    if (req.has_param("samples")) samples = req.get_param_value("samples");
    reply(res, curve(req.matches[1].str(), samples));
  });
  server.Post(R"(/classes/([^/]+)/snap)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, snap(req.matches[1].str(), req.body));
  });
  server.Put(R"(/classes/([^/]+)/annotations)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, save_annotations(req.matches[1].str(), req.body));
  });
  server.Post(R"(/classes/([^/]+)/preview)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, preview(req.matches[1].str(), req.body));
  });
  if (static_dir && !server.set_mount_point("/", static_dir->string())) {
    throw ConfigError("static directory " + static_dir->string() + " does not exist");
  }
}

}  // namespace inkmetrics
