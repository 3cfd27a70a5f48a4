#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "divmax/metric.hpp"

namespace divmax {

/// Parameters of the synthetic generator: k_planted points on the surface of
/// the unit sphere (so a set of far-away points is guaranteed to exist) and
/// the rest uniform in the concentric ball of radius inner_radius.
struct DatasetSpec {
  std::size_t n = 0;
  std::size_t k_planted = 0;
  int dim = 3;
  std::uint64_t seed = 0;
  double inner_radius = 0.8;
};

/// Deterministic per seed; surface points come first (ids 0..k_planted-1).
/// Interior points are uniform in volume: direction from normalized
/// Gaussians, radius inner_radius * U^(1/dim).
std::vector<Point> gen_sphere(const DatasetSpec& spec);

/// Dense file: whitespace-separated decimals, one point per line, uniform
/// arity. Reading is gzip-transparent. Blank lines are skipped; ids follow
/// the order of the kept lines.
std::vector<Point> load_dense(const std::string& path);

/// Sparse file: `index:count` tokens, one point per line; points with fewer
/// than min_entries entries are dropped.
std::vector<Point> load_sparse(const std::string& path, int min_entries = 10);

/// 17 significant digits, so the written values reload bit-exactly.
void save_dense(const std::string& path, std::span<const Point> points);
void save_sparse(const std::string& path, std::span<const Point> points);

}  // namespace divmax
