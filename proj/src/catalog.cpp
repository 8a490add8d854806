#include "inkmetrics/catalog.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "inkmetrics/error.hpp"

namespace inkmetrics {

using nlohmann::json;

std::string_view to_string(LineType type) {
  switch (type) {
    case LineType::kBaseline: return "baseline";
    case LineType::kXLine: return "xline";
    case LineType::kAscender: return "ascender";
    case LineType::kCapLine: return "capline";
    case LineType::kDescender: return "descender";
  }
  return "baseline";
}

std::string_view to_string(ExtremumKind kind) { return kind == ExtremumKind::kMin ? "min" : "max"; }

std::optional<LineType> parse_line_type(std::string_view name) {
  for (auto t : kAllLineTypes) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<ExtremumKind> parse_extremum_kind(std::string_view name) {
  if (name == "min") return ExtremumKind::kMin;
  if (name == "max") return ExtremumKind::kMax;
  return std::nullopt;
}

const AnnotatedModel* Catalog::find(std::string_view class_id) const {
  for (const auto& m : models) {
    if (m.class_id == class_id) return &m;
  }
  return nullptr;
}

AnnotatedModel* Catalog::find(std::string_view class_id) {
  for (auto& m : models) {
    if (m.class_id == class_id) return &m;
  }
  return nullptr;
}

void validate(const AnnotatedModel& model, const BasisKey& basis) {
  if (!(model.average.basis() == basis)) {
    throw ValidationError("model '" + model.class_id + "' does not use catalog basis " + basis.to_string());
  }
  for (const auto& a : model.annotations) {
    if (!(a.s >= 0.0 && a.s <= 1.0)) {
      throw ValidationError("model '" + model.class_id + "' has an annotation outside [0, 1]");
    }
  }
  if (!std::isfinite(model.slant_deg) || std::abs(model.slant_deg) >= 90.0) {
    throw ValidationError("model '" + model.class_id + "' slant must lie in (-90, 90) degrees");
  }
}

std::string catalog_to_json(const Catalog& catalog) {
  json models = json::array();
  for (const auto& m : catalog.models) {
    validate(m, catalog.basis);
    json annotations = json::array();
    for (const auto& a : m.annotations) {
      annotations.push_back({{"s", a.s}, {"type", to_string(a.line_type)}, {"kind", to_string(a.kind)}});
    }
    const auto& t = m.average.transform();
    models.push_back({
        {"class_id", m.class_id},
        {"sample_count", m.sample_count},
        {"coeffs", {{"x", std::vector<double>(m.average.x().begin(), m.average.x().end())},
                    {"y", std::vector<double>(m.average.y().begin(), m.average.y().end())}}},
        {"transform", {{"tx", t.tx}, {"ty", t.ty}, {"scale", t.scale}}},
        {"annotations", std::move(annotations)},
        {"slant_deg", m.slant_deg},
    });
  }
  json doc = {{"version", Catalog::kVersion},
              {"basis", {{"degree", catalog.basis.degree}, {"mu", catalog.basis.mu}}},
              {"models", std::move(models)}};
  return doc.dump(1) + "\n";
}

namespace {

[[noreturn]] void format_error(const std::string& message) {
  throw CatalogError(CatalogError::Code::kFormat, "catalog: " + message);
}

AnnotatedModel model_from_json(const json& entry, const BasisKey& basis, std::size_t index) {
  const std::string where = "models[" + std::to_string(index) + "]";
  AnnotatedModel m;
  m.class_id = entry.at("class_id").get<std::string>();
  m.sample_count = entry.value("sample_count", 0);
  m.slant_deg = entry.value("slant_deg", 0.0);

  const auto& coeffs = entry.at("coeffs");
  auto x = coeffs.at("x").get<std::vector<double>>();
  auto y = coeffs.at("y").get<std::vector<double>>();
  const auto expected = static_cast<std::size_t>(basis.degree + 1);
  if (x.size() != expected || y.size() != expected) {
    format_error(where + " ('" + m.class_id + "') has " + std::to_string(x.size()) + "/" + std::to_string(y.size()) +
                 " coefficients; basis needs " + std::to_string(expected));
  }
  std::vector<double> all = std::move(x);
  all.insert(all.end(), y.begin(), y.end());

  const auto& t = entry.at("transform");
  Transform transform{t.at("tx").get<double>(), t.at("ty").get<double>(), t.at("scale").get<double>()};
  m.average = SymbolVector(std::move(all), transform, basis, m.class_id);

  for (const auto& a : entry.value("annotations", json::array())) {
    auto type = parse_line_type(a.at("type").get<std::string>());
    auto kind = parse_extremum_kind(a.at("kind").get<std::string>());
    if (!type || !kind) format_error(where + " has an unknown annotation type or kind");
    m.annotations.push_back({a.at("s").get<double>(), *type, *kind});
  }
  return m;
}

}  // namespace

Catalog catalog_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    format_error(e.what());
  }
  if (!doc.is_object()) format_error("top level must be an object");

  const int version = doc.value("version", -1);
  if (version != Catalog::kVersion) {
    throw CatalogError(CatalogError::Code::kVersion, "catalog: unsupported version " + std::to_string(version) +
                                                         " (expected " + std::to_string(Catalog::kVersion) + ")");
  }

  Catalog catalog;
  try {
    const auto& basis = doc.at("basis");
    catalog.basis = {basis.at("degree").get<int>(), basis.at("mu").get<double>()};
  } catch (const json::exception& e) {
    format_error(std::string("basis: ") + e.what());
  }
  try {
    shared_basis(catalog.basis);
  } catch (const ConfigError& e) {
    throw CatalogError(CatalogError::Code::kBasis, std::string("catalog: unknown basis parameters: ") + e.what());
  }

  std::set<std::string> seen;
  try {
    const auto& models = doc.at("models");
    for (std::size_t i = 0; i < models.size(); ++i) {
      AnnotatedModel m = model_from_json(models[i], catalog.basis, i);
      if (!seen.insert(m.class_id).second) {
        throw CatalogError(CatalogError::Code::kDuplicateClass, "catalog: duplicate class_id '" + m.class_id + "'");
      }
      validate(m, catalog.basis);
      catalog.models.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    format_error(e.what());
  } catch (const ValidationError& e) {
    format_error(e.what());
  }
  return catalog;
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  const std::string text = catalog_to_json(catalog);
  auto tmp = path;
  static std::atomic<unsigned> counter{0};
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CatalogError(CatalogError::Code::kIo, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw CatalogError(CatalogError::Code::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw CatalogError(CatalogError::Code::kIo, "cannot replace " + path.string() + ": " + ec.message());
  }
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError(CatalogError::Code::kIo, "cannot open catalog " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return catalog_from_json(buffer.str());
}

}  // namespace inkmetrics
