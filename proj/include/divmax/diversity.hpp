#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "divmax/metric.hpp"

namespace divmax {

/// The six diversity objectives. Each carries the approximation factor of the
/// best known linear-space sequential algorithm.
enum class DiversityKind {
  remote_edge,         // min pairwise distance
  remote_clique,       // sum of pairwise distances
  remote_star,         // min over centers of the star weight
  remote_bipartition,  // min balanced-cut weight
  remote_tree,         // minimum spanning tree weight
  remote_cycle,        // optimal tour weight
};

/// Sequential approximation factor (alpha) for the kind.
double alpha_of(DiversityKind kind);

/// True for the four objectives whose core-sets carry delegates
/// (clique, star, bipartition, tree).
bool uses_delegates(DiversityKind kind);

const char* kind_name(DiversityKind kind);          // "remote-edge", ...
DiversityKind kind_from_name(const std::string& s); // inverse, throws on unknown

/// Exactness thresholds for the two objectives whose exact evaluation is
/// exponential. Above them a local-search fallback is used and the report is
/// flagged exact=false.
inline constexpr std::size_t kCycleExactMax = 12;        // Held-Karp limit
inline constexpr std::size_t kBipartitionExactMax = 20;  // balanced-split enumeration limit

struct EvalReport {
  double value = 0.0;
  bool exact = true;
};

/// Dense symmetric distance matrix over a small point set.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix pairwise_distances(std::span<const Point> s, const MetricSpace& m);

/// Evaluate a diversity measure on an explicit distance matrix. This is the
/// single evaluation path; the generalized (multiplicity) variants feed it an
/// expanded matrix with zero blocks for replicas.
EvalReport evaluate_matrix(DiversityKind kind, const DistanceMatrix& d);

/// Evaluate on a point set; |S| >= 2 required.
EvalReport evaluate(DiversityKind kind, std::span<const Point> s, const MetricSpace& m);

/// Range r_T = max over p in S \ T of d(p, T). T must be a subset of S (by
/// id) and nonempty; returns 0 when T covers S.
double range_of(std::span<const Point> t, std::span<const Point> s, const MetricSpace& m);

/// Farness rho_T = min pairwise distance within T; |T| >= 2 required.
double farness_of(std::span<const Point> t, const MetricSpace& m);

}  // namespace divmax
