#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "divmax/metric.hpp"

namespace divmax {

/// Result of the greedy k-center traversal: centers in insertion order, each
/// with the maximin distance it was selected at (infinity for the first).
/// The greedy distances are non-increasing and the centers satisfy the
/// anticover property (range <= farness for every prefix of size >= 2).
struct Kernel {
  std::vector<Point> centers;
  std::vector<double> greedy_distance;
};

/// A set of (point, multiplicity) pairs with distinct points. s(T) is the
/// number of pairs, m(T) the sum of multiplicities.
struct GeneralizedCoreset {
  struct Pair {
    Point point;
    std::size_t multiplicity = 1;
  };
  std::vector<Pair> pairs;

  std::size_t size() const { return pairs.size(); }
  std::size_t expanded_size() const {
    std::size_t m = 0;
    for (const auto& p : pairs) m += p.multiplicity;
    return m;
  }
};

/// Greedy k-center (farthest-point traversal). The first center is the first
/// point in input order; argmax ties break to the smaller point id. Runs in
/// O(|S| * kprime) with a maintained nearest-center-distance array.
/// Requires 1 <= kprime <= |S|.
Kernel gmm(std::span<const Point> s, std::size_t kprime, const MetricSpace& m);

/// The same traversal started from an explicit position (the sequential
/// solver scans several starts and keeps the best-scoring selection).
Kernel gmm_from(std::span<const Point> s, std::size_t kprime, std::size_t start,
                const MetricSpace& m);

/// Kernel plus the clustering of S around it: member_indices[j] lists the
/// positions in S assigned to center j (nearest center, ties to the smaller
/// greedy index), with the center's own position first. range is the maximum
/// distance of any point of S to the kernel.
struct Clustering {
  Kernel kernel;
  std::vector<std::vector<std::size_t>> member_indices;
  double range = 0.0;
};

Clustering gmm_clusters(std::span<const Point> s, std::size_t kprime, const MetricSpace& m);

/// Kernel of kprime centers plus up to (k-1) delegates per cluster, taken in
/// input order. Output size <= k * kprime and contains every kernel center.
std::vector<Point> gmm_ext(std::span<const Point> s, std::size_t k, std::size_t kprime,
                           const MetricSpace& m);

/// gmm_ext with an explicit per-cluster delegate cap (used by the randomized
/// two-round pipeline, where the cap replaces k-1).
std::vector<Point> gmm_ext_capped(std::span<const Point> s, std::size_t delegate_cap,
                                  std::size_t kprime, const MetricSpace& m);

/// Multiplicity form of gmm_ext on the same input with the same tie rules:
/// one pair per kernel center, multiplicity = |E_j|.
GeneralizedCoreset gmm_gen(std::span<const Point> s, std::size_t k, std::size_t kprime,
                           const MetricSpace& m);

}  // namespace divmax
