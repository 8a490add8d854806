#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "inkmetrics/catalog.hpp"
#include "inkmetrics/error.hpp"

namespace inkmetrics {

struct CriticalPoint {
  double s = 0.0;
  ExtremumKind kind = ExtremumKind::kMin;
  bool boundary = false;
};

// Interior roots of y'(s) classified by the sign change of y', plus both
// endpoints classified by one-sided behaviour, sorted by s. An endpoint where
// y is locally flat to second order is listed once per kind.
std::vector<CriticalPoint> critical_points(const LegendrePoly& y);
std::vector<CriticalPoint> critical_points(const SeriesPair& series, const LSBasis& basis);

struct SnapOptions {
  // Interval endpoints count as extrema (flagged boundary). Strokes often end
  // exactly on a metric line.
  bool admit_boundary = true;
  int max_iterations = 50;
  double step_tolerance = 1e-10;
  int max_halvings = 8;
};

struct SnapResult {
  double s = 0.0;
  bool boundary = false;
  bool used_fallback = false;  // enumeration supplied the answer, not Newton
};

class ExtremumNotFound : public Error {
 public:
  ExtremumNotFound(const std::string& what, std::optional<CriticalPoint> nearest)
      : Error(what), nearest_(nearest) {}
  const std::optional<CriticalPoint>& nearest() const noexcept { return nearest_; }

 private:
  std::optional<CriticalPoint> nearest_;
};

// The local extremum of y of the requested kind nearest to s_guess (ties go
// to the smaller s). Damped Newton on y'(s) = 0 from s_guess is tried first;
// its answer is replaced by the enumerated candidate when Newton lands on the
// wrong kind, leaves [0, 1], fails to converge, or skips a nearer candidate.
SnapResult snap_to_extremum(const LegendrePoly& y, double s_guess, ExtremumKind kind, const SnapOptions& options = {});
SnapResult snap_to_extremum(const SeriesPair& series, const LSBasis& basis, double s_guess, ExtremumKind kind,
                            const SnapOptions& options = {});

struct LocatedPoint {
  double s = 0.0;
  LineType line_type = LineType::kBaseline;
  ExtremumKind kind = ExtremumKind::kMin;
  Point position;  // page coordinates
  bool boundary = false;
  bool failed = false;
};

// One located point per annotation, in annotation order. A point whose snap
// fails is reported with failed = true at its starting location.
std::vector<LocatedPoint> locate_determining_points(const AnnotatedModel& reference, const SymbolVector& sample,
                                                    const SnapOptions& options = {});

// Follows the determining points along C(k/m) = (1 - k/m) average + (k/m)
// sample for k = 1..m, each step seeded by the previous step's locations.
// steps = 1 is identical to locate_determining_points.
std::vector<LocatedPoint> locate_multistep(const AnnotatedModel& reference, const SymbolVector& sample, int steps,
                                           const SnapOptions& options = {});

// Every intermediate location along the homotopy: steps[0] holds the
// annotations, steps[k] the locations on C(k/m). A point that moves by at
// least `jump_threshold` in one step is recorded as a jump; such
// discontinuities happen when the tracked extremum vanishes and the snap
// falls through to another one.
struct PathJump {
  std::size_t step = 0;
  std::size_t point = 0;
  double from = 0.0;
  double to = 0.0;
};

struct HomotopyPath {
  std::vector<std::vector<double>> steps;
  std::vector<PathJump> jumps;
};

HomotopyPath homotopy_path(const AnnotatedModel& reference, const SymbolVector& sample, int steps,
                           double jump_threshold = 0.1, const SnapOptions& options = {});

struct MetricLines {
  std::array<std::optional<double>, kAllLineTypes.size()> lines{};
  double slant_deg = 0.0;
  double width = 0.0;
  std::optional<double> x_height;
  std::optional<double> ascender_height;
  std::optional<double> cap_height;
  std::optional<double> descender_depth;  // baseline - descender line, positive below

  std::optional<double> line(LineType type) const { return lines[static_cast<std::size_t>(type)]; }
  std::optional<double> baseline() const { return line(LineType::kBaseline); }

  // x-height, else cap height, else ascender height.
  std::optional<double> reference_height() const;

  // ascender >= x line >= baseline >= descender for every present pair.
  bool ordering_consistent() const;
};

MetricLines metric_lines(const SymbolVector& sample, std::span<const LocatedPoint> points, double slant_deg);

// Distance between the left and right bounding lines inclined slant_deg from
// vertical (positive leans right), in page units. Throws DomainError unless
// |slant_deg| < 90.
double slanted_width(const SymbolVector& sample, double slant_deg);

}  // namespace inkmetrics
