#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "divmax/diversity.hpp"
#include "divmax/kcenter.hpp"
#include "divmax/metric.hpp"
#include "divmax/seqsolve.hpp"

namespace divmax {

enum class Partitioning { contiguous, random, adversarial };

const char* partitioning_name(Partitioning p);
Partitioning partitioning_from_name(const std::string& s);

/// Configuration of the simulated MapReduce runs. Partitions are processed
/// as independent tasks over immutable slices; `threads` caps how many run
/// concurrently (results are reduced in partition order, so the output does
/// not depend on it).
struct PipelineConfig {
  std::size_t ell = 1;
  Partitioning partitioning = Partitioning::contiguous;
  std::size_t k = 2;
  std::size_t kprime = 0;  // 0 -> default 8k; ignored in strict mode
  double epsilon = 1.0;
  int ddim = 3;
  double gamma = 1.0 / 3.0;        // recursion parameter, in (0, 1/3]
  bool strict = false;             // derive kprime from the theorem constants
  std::size_t memory_budget = 0;   // M_L for the multi-round variant
  std::uint64_t seed = 0;
  int threads = 1;
  double rand_cap_c = 4.0;  // constant in the randomized delegate cap
};

struct RoundTraceRow {
  int round = 0;
  std::size_t partition = 0;
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  double millis = 0.0;
};

/// Per-round observability: partition sizes, core-set sizes (pairs for the
/// generalized pipeline), and wall-clock time per task.
struct RoundTrace {
  std::vector<RoundTraceRow> rows;

  std::size_t aggregate_output(int round) const;
  /// Header `round,partition,input_size,output_size,millis`.
  std::string to_csv(bool timing = true) const;
};

struct MrResult {
  Solution solution;
  RoundTrace trace;
  /// The union of the per-partition core-sets handed to the final solve (the
  /// final level's union for the multi-round variant).
  std::vector<Point> aggregate;
  /// Aggregated (point, multiplicity) pairs of the generalized pipeline.
  GeneralizedCoreset aggregate_pairs;
};

/// Deterministic 2-round algorithm: per-partition core-sets (kernel only for
/// remote-edge/remote-cycle, kernel + delegates otherwise), then a sequential
/// solve on their union.
MrResult mr_two_round(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                      const MetricSpace& m);

/// Randomized 2-round variant for the delegate-bearing measures: random
/// partitioning plus a per-cluster delegate cap of ceil(c * max(ln n, k/ell))
/// instead of k-1.
MrResult mr_randomized(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                       const MetricSpace& m);

/// Recursive multi-round variant for small local memories: core-set rounds
/// shrink the input until it fits the memory budget, with the per-level
/// epsilon split so the compounded factor stays within alpha + epsilon.
MrResult mr_multi_round(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                        const MetricSpace& m);

/// 3-round generalized pipeline: per-partition (point, multiplicity) pairs,
/// an aggregate solve to expanded size k, then a per-partition instantiation
/// that replaces multiplicities by distinct nearby delegates.
MrResult mr_three_round_gen(std::span<const Point> s, DiversityKind kind,
                            const PipelineConfig& cfg, const MetricSpace& m);

}  // namespace divmax
