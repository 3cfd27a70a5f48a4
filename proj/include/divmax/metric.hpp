#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace divmax {

/// An identified vector, either dense (fixed dimension within a dataset) or
/// sparse index->count (word-count style data). The Euclidean norm is
/// computed once at construction; cosine evaluation depends on it being hot.
struct Point {
  std::int64_t id = 0;
  bool sparse = false;
  std::vector<double> coords;                               // dense representation
  std::vector<std::pair<std::uint32_t, double>> entries;    // sparse, sorted by index
  double norm = 0.0;

  static Point dense(std::int64_t id, std::vector<double> coords);
  /// Entries are sorted by index; counts must be strictly positive and the
  /// point must have at least one entry.
  static Point sparse_counts(std::int64_t id,
                             std::vector<std::pair<std::uint32_t, double>> entries);

  std::size_t dim() const { return coords.size(); }
  bool same_coords(const Point& other) const;
};

enum class MetricKind { euclidean, cosine };

/// Distance-function selector. Immutable; all operations are pure.
struct MetricSpace {
  MetricKind kind = MetricKind::euclidean;
};

inline MetricSpace euclidean_space() { return MetricSpace{MetricKind::euclidean}; }
inline MetricSpace cosine_space() { return MetricSpace{MetricKind::cosine}; }

/// d(p, q). Cosine is arccos of the normalized dot product, clamped to
/// [-1, 1] before evaluation; result lies in [0, pi]. Throws on dimension or
/// representation mismatch, and on a zero vector under cosine.
double distance(const Point& p, const Point& q, const MetricSpace& m);

/// d(p, S) = min over q in S of d(p, q). S must be nonempty.
double set_distance(const Point& p, std::span<const Point> s, const MetricSpace& m);

}  // namespace divmax
