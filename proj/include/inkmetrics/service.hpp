#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "inkmetrics/catalog.hpp"

namespace httplib {
class Server;
}

namespace inkmetrics {

// Parameter value of the point on the average's page-space curve nearest to
// `page`: best of `samples` uniform samples, then refined by golden-section
// search between the neighbouring samples.
double nearest_parameter(const SymbolVector& symbol, Point page, int samples = 1024);

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

// Backend of the annotation tool. Every handler takes the request body as
// text and answers with a status code and a JSON body; errors carry
// {"error": code, "message": text}. Reads work on an immutable snapshot of
// the catalog; saves are serialized, written to disk atomically, then
// published as the new snapshot.
class AnnotationService {
 public:
  // `persist_to` empty keeps the catalog in memory only.
  explicit AnnotationService(Catalog catalog, std::filesystem::path persist_to = {});

  // Loads the catalog file, which later saves overwrite.
  static std::unique_ptr<AnnotationService> open(const std::filesystem::path& catalog_path);

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;
  AnnotationService(AnnotationService&&) = delete;

  // GET /classes
  ServiceResponse list_classes() const;
  // GET /classes/{id}/curve?samples=N
  ServiceResponse curve(std::string_view class_id, std::optional<std::string_view> samples) const;
  // POST /classes/{id}/snap  {"kind": "min"|"max", "s_guess": num} or {"kind", "point": [x, y]}
  ServiceResponse snap(std::string_view class_id, std::string_view body) const;
  // PUT /classes/{id}/annotations  {"annotations": [{"s", "type", "kind"}], "slant_deg": num,
  //                                  "revision": int (optional; 409 if stale)}
  ServiceResponse save_annotations(std::string_view class_id, std::string_view body);
  // POST /classes/{id}/preview  {"ink": <ink document>, "steps": int (default 3)}
  ServiceResponse preview(std::string_view class_id, std::string_view body) const;

  std::shared_ptr<const Catalog> snapshot() const;
  std::uint64_t revision(std::string_view class_id) const;

  // Registers the routes; serves `static_dir` at "/" when given.
  void mount(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir = std::nullopt);

 private:
  mutable std::shared_mutex snapshot_mutex_;
  std::shared_ptr<const Catalog> catalog_;
  std::map<std::string, std::uint64_t, std::less<>> revisions_;
  std::mutex write_mutex_;
  std::filesystem::path persist_to_;
};

}  // namespace inkmetrics
