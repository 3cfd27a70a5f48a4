#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "divmax/diversity.hpp"
#include "divmax/kcenter.hpp"
#include "divmax/metric.hpp"

namespace divmax {

/// A k-subset solution with its diversity value and run metadata. The
/// generalized paths additionally report the multiset value they solved for
/// and the radius within which the multiset was instantiated.
struct Solution {
  std::vector<Point> points;
  EvalReport value;
  DiversityKind kind = DiversityKind::remote_edge;
  double alpha = 0.0;

  double gendiv_value = 0.0;          // gendiv of the solved coherent subset
  double instantiation_radius = 0.0;  // max distance of a delegate to its pair point
  double kernel_range = 0.0;          // r_T of the construction, when applicable
  std::uint64_t seed = 0;
};

/// Sequential alpha-approximation. remote_clique uses greedy farthest-pair
/// matching (guarantee stated for even k); the other five use the greedy
/// k-center selection. Requires |S| >= k >= 2.
Solution solve_sequential(DiversityKind kind, std::span<const Point> s, std::size_t k,
                          const MetricSpace& m);

/// Generalized diversity of a core-set: the measure evaluated on its
/// expansion, with replicas of the same point at distance 0 from one another.
/// Requires m(T) >= 2.
double gendiv(DiversityKind kind, const GeneralizedCoreset& t, const MetricSpace& m);

/// Adapt the sequential solver to a generalized core-set: returns a coherent
/// subset with expanded size exactly k. Works at pair granularity, in space
/// proportional to s(T). Supported for the four delegate-bearing measures.
GeneralizedCoreset solve_generalized(DiversityKind kind, const GeneralizedCoreset& t,
                                     std::size_t k, const MetricSpace& m);

}  // namespace divmax
