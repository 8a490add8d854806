#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace inkmetrics {

enum class LineType { kBaseline, kXLine, kAscender, kCapLine, kDescender };
enum class ExtremumKind { kMin, kMax };

inline constexpr std::array<LineType, 5> kAllLineTypes = {LineType::kBaseline, LineType::kXLine, LineType::kAscender,
                                                          LineType::kCapLine, LineType::kDescender};

std::string_view to_string(LineType type);
std::string_view to_string(ExtremumKind kind);
// Return nullopt for unknown names.
std::optional<LineType> parse_line_type(std::string_view name);
std::optional<ExtremumKind> parse_extremum_kind(std::string_view name);

// Annotation on a reference symbol: arc-length location, which metric line
// the point defines, and whether it is a local minimum or maximum of y.
struct DeterminingPointSpec {
  double s = 0.0;
  LineType line_type = LineType::kBaseline;
  ExtremumKind kind = ExtremumKind::kMin;

  friend bool operator==(const DeterminingPointSpec&, const DeterminingPointSpec&) = default;
};

}  // namespace inkmetrics
