#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inkmetrics/determining_point.hpp"
#include "inkmetrics/symbol.hpp"

namespace inkmetrics {

struct AnnotatedModel {
  std::string class_id;
  SymbolVector average;
  std::vector<DeterminingPointSpec> annotations;
  int sample_count = 0;
  double slant_deg = 0.0;

  friend bool operator==(const AnnotatedModel&, const AnnotatedModel&) = default;
};

// All models of one catalog share a single basis.
struct Catalog {
  static constexpr int kVersion = 1;

  BasisKey basis;
  std::vector<AnnotatedModel> models;

  const AnnotatedModel* find(std::string_view class_id) const;
  AnnotatedModel* find(std::string_view class_id);

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

// Throws ValidationError for out-of-range s or a basis mismatch.
void validate(const AnnotatedModel& model, const BasisKey& basis);

std::string catalog_to_json(const Catalog& catalog);
// Throws CatalogError with a code per failure class: kFormat, kVersion,
// kBasis, kDuplicateClass.
Catalog catalog_from_json(std::string_view text);

// save_catalog writes to a sibling temporary file and renames it into place,
// so readers never see a partially written catalog.
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);
Catalog load_catalog(const std::filesystem::path& path);

}  // namespace inkmetrics
