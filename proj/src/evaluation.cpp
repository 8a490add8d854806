#include "inkmetrics/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <thread>

#include "inkmetrics/detect.hpp"
#include "inkmetrics/error.hpp"

namespace inkmetrics {

std::optional<double> oracle_extremum(const LegendrePoly& y, double expected_s, ExtremumKind kind, int grid_points) {
  const double sign = kind == ExtremumKind::kMin ? 1.0 : -1.0;
  std::vector<double> v(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) v[i] = sign * y.value(static_cast<double>(i) / (grid_points - 1));

  std::optional<double> best;
  for (int i = 0; i < grid_points; ++i) {
    const bool left = i == 0 || v[i] < v[i - 1];
    const bool right = i == grid_points - 1 || v[i] <= v[i + 1];
    if (!left || !right) continue;
    const double s = static_cast<double>(i) / (grid_points - 1);
    if (!best || std::abs(s - expected_s) < std::abs(*best - expected_s)) best = s;
  }
  return best;
}

bool is_mispositioned(const LegendrePoly& y, double found, std::optional<double> oracle, double symbol_height,
                      const MisPositionRule& rule) {
  if (!oracle) return true;
  if (std::abs(found - *oracle) > rule.max_arc_length_error) return true;
  return std::abs(y.value(found) - y.value(*oracle)) > rule.max_height_fraction * symbol_height;
}

namespace {

double curve_height(const LegendrePoly& y) {
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double v = y.value(i / 1000.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

struct SampleOutcome {
  std::vector<bool> failed;  // per step count
  std::vector<FailureRecord> failures;
};

SampleOutcome evaluate_sample(const SyntheticClass& cls, std::size_t index, const std::vector<int>& steps_list,
                              const MisPositionRule& rule) {
  const auto& sample = cls.samples[index];
  const auto basis = shared_basis(sample.vector.basis());
  const auto y = basis->combine(sample.vector.y());
  const double height = curve_height(y);

  std::vector<std::optional<double>> oracle;
  for (std::size_t i = 0; i < cls.base.annotations.size(); ++i) {
    oracle.push_back(oracle_extremum(y, sample.expected_s[i], cls.base.annotations[i].kind));
  }

  SampleOutcome out;
  for (int m : steps_list) {
    const auto located = locate_multistep(cls.base, sample.vector, m);
    bool any = false;
    for (std::size_t i = 0; i < located.size(); ++i) {
      const bool bad = located[i].failed || is_mispositioned(y, located[i].s, oracle[i], height, rule);
      if (!bad) continue;
      any = true;
      out.failures.push_back({cls.base.class_id, index, sample.seed, m, i, located[i].s, oracle[i],
                              sample.expected_s[i], located[i].failed});
    }
    out.failed.push_back(any);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

EvaluationResult run_evaluation(const std::vector<SyntheticClass>& classes, const std::vector<int>& steps_list,
                                unsigned threads, const MisPositionRule& rule) {
  if (classes.empty()) throw ValidationError("evaluation needs at least one class");
  if (steps_list.empty()) throw ValidationError("evaluation needs at least one step count");
  for (std::size_t i = 0; i < steps_list.size(); ++i) {
    if (steps_list[i] < 1 || (i > 0 && steps_list[i] <= steps_list[i - 1])) {
      throw ValidationError("step counts must be positive and strictly ascending");
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].samples.empty()) continue;
    if (classes[c].base.annotations.empty()) {
      throw ValidationError("class '" + classes[c].base.class_id + "' has no annotations");
    }
    for (std::size_t s = 0; s < classes[c].samples.size(); ++s) work.emplace_back(c, s);
  }

  std::vector<SampleOutcome> outcomes(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> stop{false};
  const auto worker = [&] {
    try {
      for (std::size_t i = next++; i < work.size() && !stop; i = next++) {
        outcomes[i] = evaluate_sample(classes[work[i].first], work[i].second, steps_list, rule);
      }
    } catch (...) {
      if (!stop.exchange(true)) error = std::current_exception();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, work.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  EvaluationResult result;
  auto& table = result.table;
  table.steps = steps_list;
  table.failed_counts.assign(steps_list.size(), 0);
  table.sample_total = static_cast<int>(work.size());
  for (auto& o : outcomes) {
    for (std::size_t k = 0; k < steps_list.size(); ++k) table.failed_counts[k] += o.failed[k] ? 1 : 0;
    result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
  }
  for (int f : table.failed_counts) {
    table.error_rates.push_back(table.sample_total > 0 ? static_cast<double>(f) / table.sample_total : 0.0);
  }
  return result;
}

std::string format_error_table(const ErrorTable& table) {
  std::string out = "steps    failed     total   error rate\n";
  char line[96];
  for (std::size_t i = 0; i < table.steps.size(); ++i) {
    std::snprintf(line, sizeof line, "%5d  %8d  %8d   %9.3f%%\n", table.steps[i], table.failed_counts[i],
                  table.sample_total, 100.0 * table.error_rates[i]);
    out += line;
  }
  return out;
}

std::string error_table_csv(const ErrorTable& table) {
  std::string out = "steps,failed,total,rate\n";
  for (std::size_t i = 0; i < table.steps.size(); ++i) {
    out += std::to_string(table.steps[i]) + "," + std::to_string(table.failed_counts[i]) + "," +
           std::to_string(table.sample_total) + "," + format_double(table.error_rates[i]) + "\n";
  }
  return out;
}

std::string format_failures(const std::vector<FailureRecord>& failures) {
  std::string out;
  char line[192];
  for (const auto& f : failures) {
    if (f.not_located) {
      std::snprintf(line, sizeof line, "class=%s sample=%zu seed=%llu steps=%d point=%zu not located\n",
                    f.class_id.c_str(), f.sample_index, static_cast<unsigned long long>(f.sample_seed), f.steps,
                    f.point);
    } else if (f.oracle) {
      std::snprintf(line, sizeof line, "class=%s sample=%zu seed=%llu steps=%d point=%zu found=%.6f oracle=%.6f\n",
                    f.class_id.c_str(), f.sample_index, static_cast<unsigned long long>(f.sample_seed), f.steps,
                    f.point, f.found, *f.oracle);
    } else {
      std::snprintf(line, sizeof line, "class=%s sample=%zu seed=%llu steps=%d point=%zu found=%.6f oracle=none\n",
                    f.class_id.c_str(), f.sample_index, static_cast<unsigned long long>(f.sample_seed), f.steps,
                    f.point, f.found);
    }
    out += line;
  }
  return out;
}

std::vector<SyntheticClass> builtin_benchmark(const BenchmarkConfig& config) {
  std::vector<SyntheticClass> classes;
  std::uint64_t index = 0;
  for (const auto& glyph : builtin_glyphs()) {
    const auto model = build_model(glyph, config.basis);
    const auto source = parameterize(render_glyph(glyph));
    const std::uint64_t class_seed = config.seed * 1000003ULL + (++index);
    classes.push_back(generate_synthetic_class(model, config.samples_per_class, config.noise, class_seed,
                                               config.synthesis, &source));
  }
  return classes;
}

}  // namespace inkmetrics
