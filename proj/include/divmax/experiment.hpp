#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divmax/metric.hpp"
#include "divmax/pipeline.hpp"

namespace divmax {

/// One CSV row of the experiment harness. Ratios are reported as
/// baseline / value >= 1 and only when a baseline is present.
struct ExperimentRecord {
  std::string algorithm;  // seq|stream|stream2pass|mr2|mr2rand|mrmulti|mr3gen|oracle|throughput
  std::string kind;       // remote-edge ... or "-" for kind-independent rows
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t kprime = 0;
  std::int64_t ell = 0;
  std::string partitioning;  // or "-"
  std::uint64_t seed = 0;
  double value = 0.0;
  std::optional<double> baseline_value;
  std::optional<double> ratio;
  double millis = 0.0;
  double throughput_pts_per_sec = 0.0;
};

/// Stable CSV header; every row emitted by the harness parses back.
std::string experiment_csv_header();
std::string experiment_to_csv(const ExperimentRecord& r);
ExperimentRecord experiment_from_csv(const std::string& line);

struct RunParams {
  std::string algorithm = "seq";
  std::string kind = "remote-edge";
  std::string metric = "euclidean";
  std::string partitioning = "contiguous";
  std::size_t k = 2;
  std::size_t kprime = 0;
  std::size_t ell = 1;
  double epsilon = 1.0;
  int ddim = 3;
  double gamma = 1.0 / 3.0;
  std::size_t memory_budget = 0;
  std::uint64_t seed = 0;
  int repeat = 1;
  bool strict = false;
  int threads = 1;
  double cap_c = 4.0;
  std::optional<double> baseline;
  bool timing = true;  // false zeroes the timing columns for byte-stable output
};

/// Runs the selected algorithm `repeat` times with seeds seed..seed+repeat-1
/// and returns one record per run. Streaming algorithms consume the dataset
/// in a seed-shuffled order; MapReduce ones key their partitioning off the
/// seed.
std::vector<ExperimentRecord> run_experiment(std::span<const Point> dataset,
                                             const RunParams& params);

/// Reference value for large instances: the best solution over `repeats`
/// two-round runs with random partitioning and a large kprime.
double compute_baseline(std::span<const Point> dataset, DiversityKind kind,
                        const MetricSpace& metric, std::size_t k, std::size_t kprime,
                        std::size_t ell, std::uint64_t seed, int repeats, int threads);

/// Per-point processing rate of the streaming kernel, excluding source I/O:
/// the dataset is pre-loaded and only the offer() loop is timed.
/// variant is "smm" or "smmext".
ExperimentRecord measure_throughput(std::span<const Point> dataset, const MetricSpace& metric,
                                    const std::string& variant, std::size_t k,
                                    std::size_t kprime, bool timing);

MetricSpace metric_from_name(const std::string& name);

}  // namespace divmax
