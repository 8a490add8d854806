#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inkmetrics/synthetic.hpp"

namespace inkmetrics {

struct ErrorTable {
  std::vector<int> steps;
  std::vector<int> failed_counts;
  std::vector<double> error_rates;  // failed / total
  int sample_total = 0;
};

// One mis-positioned (or unlocated) determining point.
struct FailureRecord {
  std::string class_id;
  std::size_t sample_index = 0;
  std::uint64_t sample_seed = 0;
  int steps = 0;
  std::size_t point = 0;
  double found = 0.0;
  std::optional<double> oracle;  // absent when the sample has no extremum of that kind
  double expected = 0.0;
  bool not_located = false;
};

struct EvaluationResult {
  ErrorTable table;
  std::vector<FailureRecord> failures;  // class, sample, steps, point order
};

// Dense-grid reference for where a determining point should be: the local
// extremum of the requested kind (10^4 uniform samples, endpoints judged
// one-sidedly) nearest to `expected_s`.
std::optional<double> oracle_extremum(const LegendrePoly& y, double expected_s, ExtremumKind kind,
                                      int grid_points = 10000);

struct MisPositionRule {
  double max_arc_length_error = 0.05;
  double max_height_fraction = 0.05;
};

// True if `found` is further than the rule allows from the oracle extremum,
// in arc length or in y relative to the symbol's height.
bool is_mispositioned(const LegendrePoly& y, double found, std::optional<double> oracle, double symbol_height,
                      const MisPositionRule& rule = {});

// Runs locate_multistep for every step count on every sample. A sample fails
// at m if any of its determining points is mis-positioned or not located.
// Work is spread over `threads` workers (0 = hardware concurrency); results
// do not depend on the thread count. Throws ValidationError for empty input
// or a step list that is not strictly ascending and positive.
EvaluationResult run_evaluation(const std::vector<SyntheticClass>& classes, const std::vector<int>& steps_list,
                                unsigned threads = 0, const MisPositionRule& rule = {});

std::string format_error_table(const ErrorTable& table);
std::string error_table_csv(const ErrorTable& table);
std::string format_failures(const std::vector<FailureRecord>& failures);

struct BenchmarkConfig {
  std::uint64_t seed = 7;
  int samples_per_class = 100;
  double noise = 0.02;
  BasisKey basis;
  SynthesisOptions synthesis;
};

// One synthetic class per built-in glyph, each with its own derived seed.
std::vector<SyntheticClass> builtin_benchmark(const BenchmarkConfig& config);

}  // namespace inkmetrics
