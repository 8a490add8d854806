#include "inkmetrics/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace inkmetrics {

namespace {

// Upper bounds of |p'| and |p''| on [0, 1], used to decide when an endpoint
// derivative is numerically zero.
std::pair<double, double> derivative_bounds(const LegendrePoly& p) {
  double d1 = 0.0, d2 = 0.0;
  const auto c = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double norm = std::sqrt(2.0 * kk + 1.0);
    d1 += std::abs(c[k]) * norm * kk * (kk + 1.0);
    d2 += std::abs(c[k]) * norm * (kk - 1.0) * kk * (kk + 1.0) * (kk + 2.0) / 2.0;
  }
  return {d1, d2};
}

void classify_endpoint(const LegendrePoly& y, bool at_start, std::vector<CriticalPoint>& out) {
  const double s = at_start ? 0.0 : 1.0;
  const auto jet = y.jet(s);
  const auto [b1, b2] = derivative_bounds(y);
  const double inward_slope = at_start ? jet.d1 : -jet.d1;
  if (inward_slope > 1e-12 * b1) {
    out.push_back({s, ExtremumKind::kMin, true});
  } else if (inward_slope < -1e-12 * b1) {
    out.push_back({s, ExtremumKind::kMax, true});
  } else if (jet.d2 > 1e-12 * b2) {
    out.push_back({s, ExtremumKind::kMin, true});
  } else if (jet.d2 < -1e-12 * b2) {
    out.push_back({s, ExtremumKind::kMax, true});
  } else {
    out.push_back({s, ExtremumKind::kMin, true});
    out.push_back({s, ExtremumKind::kMax, true});
  }
}

std::optional<CriticalPoint> nearest_candidate(const std::vector<CriticalPoint>& candidates, double s_guess,
                                               std::optional<ExtremumKind> kind, bool admit_boundary) {
  std::optional<CriticalPoint> best;
  for (const auto& c : candidates) {
    if (kind && c.kind != *kind) continue;
    if (c.boundary && !admit_boundary) continue;
    // Candidates are sorted by s, so strict comparison keeps the smaller s on ties.
    if (!best || std::abs(c.s - s_guess) < std::abs(best->s - s_guess)) best = c;
  }
  return best;
}

std::optional<double> newton_extremum(const LegendrePoly& y, double s, ExtremumKind kind, const SnapOptions& opt) {
  const double sign = kind == ExtremumKind::kMin ? 1.0 : -1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto jet = y.jet(s);
    const double g = sign * jet.d1;
    const double h = sign * jet.d2;
    if (!(h > 0.0)) return std::nullopt;  // heading for the wrong kind

    double step = -g / h;
    double next = std::clamp(s + step, 0.0, 1.0);
    double g_next = sign * y.derivative(next);
    for (int halving = 0; halving < opt.max_halvings && std::abs(g_next) > std::abs(g); ++halving) {
      step *= 0.5;
      next = std::clamp(s + step, 0.0, 1.0);
      g_next = sign * y.derivative(next);
    }
    const double delta = next - s;
    s = next;
    if (std::abs(delta) < opt.step_tolerance) {
      if (s <= 0.0 || s >= 1.0) return std::nullopt;  // pinned against the interval edge
      if (!(sign * y.jet(s).d2 > 0.0)) return std::nullopt;
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const LegendrePoly& y) {
  std::vector<CriticalPoint> out;
  classify_endpoint(y, true, out);
  const auto derivative = [&y](double s) { return y.derivative(s); };
  for (const auto& c : sign_changes(derivative)) {
    out.push_back({c.s, c.rising ? ExtremumKind::kMin : ExtremumKind::kMax, false});
  }
  classify_endpoint(y, false, out);
  return out;
}

std::vector<CriticalPoint> critical_points(const SeriesPair& series, const LSBasis& basis) {
  return critical_points(to_curve(series, basis).y);
}

SnapResult snap_to_extremum(const LegendrePoly& y, double s_guess, ExtremumKind kind, const SnapOptions& options) {
  if (!(s_guess >= 0.0 && s_guess <= 1.0)) throw DomainError("snap guess outside [0, 1]");

  const auto candidates = critical_points(y);
  const auto enumerated = nearest_candidate(candidates, s_guess, kind, options.admit_boundary);

  if (auto newton = newton_extremum(y, s_guess, kind, options)) {
    const double dn = std::abs(*newton - s_guess);
    bool keep = true;
    if (enumerated) {
      const double de = std::abs(enumerated->s - s_guess);
      if (de < dn - 1e-9) keep = false;
      if (std::abs(de - dn) <= 1e-9 && enumerated->s < *newton - 1e-9) keep = false;
    }
    if (keep) return {*newton, false, false};
  }

  if (!enumerated) {
    throw ExtremumNotFound(std::string("no local ") + std::string(to_string(kind)) + " of y in [0, 1]",
                           nearest_candidate(candidates, s_guess, std::nullopt, true));
  }
  return {enumerated->s, enumerated->boundary, true};
}

SnapResult snap_to_extremum(const SeriesPair& series, const LSBasis& basis, double s_guess, ExtremumKind kind,
                            const SnapOptions& options) {
  return snap_to_extremum(to_curve(series, basis).y, s_guess, kind, options);
}

namespace {

void check_pair(const AnnotatedModel& reference, const SymbolVector& sample) {
  if (!(reference.average.basis() == sample.basis())) {
    throw ValidationError("sample basis " + sample.basis().to_string() + " does not match model '" +
                          reference.class_id + "'");
  }
  if (reference.annotations.empty()) {
    throw ValidationError("model '" + reference.class_id + "' has no determining-point annotations");
  }
}

struct Track {
  double s = 0.0;
  bool boundary = false;
  bool failed = false;
};

void snap_all(const LegendrePoly& y, const AnnotatedModel& reference, std::vector<Track>& tracks,
              const SnapOptions& options) {
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    try {
      const auto r = snap_to_extremum(y, tracks[i].s, reference.annotations[i].kind, options);
      tracks[i] = {r.s, r.boundary, false};
    } catch (const ExtremumNotFound&) {
      tracks[i].failed = true;
    }
  }
}

std::vector<LocatedPoint> finish(const AnnotatedModel& reference, const SymbolVector& sample, const Curve& curve,
                                 const std::vector<Track>& tracks) {
  std::vector<LocatedPoint> out;
  out.reserve(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto& a = reference.annotations[i];
    out.push_back({tracks[i].s, a.line_type, a.kind, sample.transform().apply(curve.at(tracks[i].s)),
                   tracks[i].boundary, tracks[i].failed});
  }
  return out;
}

}  // namespace

std::vector<LocatedPoint> locate_determining_points(const AnnotatedModel& reference, const SymbolVector& sample,
                                                    const SnapOptions& options) {
  return locate_multistep(reference, sample, 1, options);
}

namespace {

template <class OnStep>
std::vector<Track> follow(const AnnotatedModel& reference, const SymbolVector& sample, int steps,
                          const SnapOptions& options, OnStep on_step) {
  if (steps < 1) throw DomainError("homotopy step count must be >= 1");
  check_pair(reference, sample);
  const auto basis = shared_basis(sample.basis());

  std::vector<Track> tracks;
  tracks.reserve(reference.annotations.size());
  for (const auto& a : reference.annotations) tracks.push_back({a.s, a.s == 0.0 || a.s == 1.0, false});

  for (int k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    const SymbolVector step = interpolate(reference.average, sample, t);
    for (auto& tr : tracks) tr.failed = false;
    snap_all(basis->combine(step.y()), reference, tracks, options);
    on_step(tracks);
  }
  return tracks;
}

}  // namespace

std::vector<LocatedPoint> locate_multistep(const AnnotatedModel& reference, const SymbolVector& sample, int steps,
                                           const SnapOptions& options) {
  const auto tracks = follow(reference, sample, steps, options, [](const std::vector<Track>&) {});
  return finish(reference, sample, sample.normalized_curve(*shared_basis(sample.basis())), tracks);
}

HomotopyPath homotopy_path(const AnnotatedModel& reference, const SymbolVector& sample, int steps,
                           double jump_threshold, const SnapOptions& options) {
  HomotopyPath path;
  std::vector<double> start;
  for (const auto& a : reference.annotations) start.push_back(a.s);
  path.steps.push_back(std::move(start));
  follow(reference, sample, steps, options, [&](const std::vector<Track>& tracks) {
    const auto& previous = path.steps.back();
    std::vector<double> now;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      now.push_back(tracks[i].s);
      if (std::abs(tracks[i].s - previous[i]) >= jump_threshold) {
        path.jumps.push_back({path.steps.size(), i, previous[i], tracks[i].s});
      }
    }
    path.steps.push_back(std::move(now));
  });
  return path;
}

std::optional<double> MetricLines::reference_height() const {
  if (x_height) return x_height;
  if (cap_height) return cap_height;
  return ascender_height;
}

bool MetricLines::ordering_consistent() const {
  const std::array<std::optional<double>, 4> upper_to_lower = {line(LineType::kAscender), line(LineType::kXLine),
                                                                line(LineType::kBaseline), line(LineType::kDescender)};
  std::optional<double> above;
  for (const auto& v : upper_to_lower) {
    if (!v) continue;
    if (above && *v > *above) return false;
    above = v;
  }
  const auto cap = line(LineType::kCapLine);
  const auto base = line(LineType::kBaseline);
  return !(cap && base && *cap < *base);
}

MetricLines metric_lines(const SymbolVector& sample, std::span<const LocatedPoint> points, double slant_deg) {
  MetricLines out;
  out.slant_deg = slant_deg;
  std::array<double, kAllLineTypes.size()> sum{};
  std::array<int, kAllLineTypes.size()> count{};
  for (const auto& p : points) {
    if (p.failed) continue;
    const auto i = static_cast<std::size_t>(p.line_type);
    sum[i] += p.position.y;
    ++count[i];
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (count[i] > 0) out.lines[i] = sum[i] / count[i];
  }
  if (const auto base = out.baseline()) {
    if (auto v = out.line(LineType::kXLine)) out.x_height = *v - *base;
    if (auto v = out.line(LineType::kAscender)) out.ascender_height = *v - *base;
    if (auto v = out.line(LineType::kCapLine)) out.cap_height = *v - *base;
    if (auto v = out.line(LineType::kDescender)) out.descender_depth = *base - *v;
  }
  out.width = slanted_width(sample, slant_deg);
  return out;
}

double slanted_width(const SymbolVector& sample, double slant_deg) {
  if (!(std::abs(slant_deg) < 90.0)) throw DomainError("slant must lie strictly between -90 and 90 degrees");
  const auto basis = shared_basis(sample.basis());
  const Curve curve = sample.normalized_curve(*basis);
  const double shear = std::tan(slant_deg * std::numbers::pi / 180.0);
  // Sheared abscissa x - tan(theta) y is constant along a line of the slant.
  const LegendrePoly u = curve.x + (-shear) * curve.y;

  double lo = std::min(u.value(0.0), u.value(1.0));
  double hi = std::max(u.value(0.0), u.value(1.0));
  const auto du = [&u](double s) { return u.derivative(s); };
  for (const auto& c : sign_changes(du)) {
    const double v = u.value(c.s);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return sample.transform().scale * (hi - lo);
}

}  // namespace inkmetrics
