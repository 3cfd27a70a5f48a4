#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "divmax/diversity.hpp"
#include "divmax/metric.hpp"

namespace divmax {

struct OracleResult {
  double value = 0.0;
  std::vector<Point> witness;
  std::uint64_t subsets_examined = 0;  // equals C(|S|, k)
};

/// Maximum number of subsets the oracle will enumerate.
inline constexpr std::uint64_t kOracleGuard = 1000000;

/// Exact k-diversity by exhaustive enumeration of all k-subsets, in
/// lexicographic id order; ties keep the first witness. Refuses when
/// C(|S|, k) exceeds the guard or the kind's exact evaluator is unavailable
/// at this k (cycle k > 12, bipartition k > 20).
OracleResult brute_force(DiversityKind kind, std::span<const Point> s, std::size_t k,
                         const MetricSpace& m);

/// Exhaustive optimal range r_k^* = min over k-subsets T of range_of(T, S).
double min_range_exhaustive(std::span<const Point> s, std::size_t k, const MetricSpace& m);

/// Exhaustive optimal farness rho_k^* = max over k-subsets T of farness_of(T).
double max_farness_exhaustive(std::span<const Point> s, std::size_t k, const MetricSpace& m);

}  // namespace divmax
