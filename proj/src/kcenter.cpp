#include "divmax/kcenter.hpp"

#include <algorithm>
#include <limits>

#include "divmax/error.hpp"

namespace divmax {

namespace {

// Greedy traversal keeping, for every point, its distance to the nearest
// selected center and the greedy index of that center (ties to the smaller
// greedy index by strict-improvement updates).
struct Traversal {
  std::vector<std::size_t> center_pos;   // positions in S, insertion order
  std::vector<double> greedy_distance;   // maximin value at selection
  std::vector<double> nearest;           // per point
  std::vector<std::size_t> nearest_idx;  // greedy index of the nearest center
};

Traversal traverse(std::span<const Point> s, std::size_t kprime, const MetricSpace& m,
                   std::size_t start = 0) {
  if (kprime < 1) raise(ErrorCode::argument, "gmm needs kprime >= 1");
  if (kprime > s.size()) {
    raise(ErrorCode::argument, "gmm: kprime " + std::to_string(kprime) + " exceeds |S| = " +
                                   std::to_string(s.size()));
  }
  if (start >= s.size()) raise(ErrorCode::argument, "gmm: start position out of range");
  Traversal t;
  t.center_pos.reserve(kprime);
  t.greedy_distance.reserve(kprime);
  t.nearest.assign(s.size(), std::numeric_limits<double>::infinity());
  t.nearest_idx.assign(s.size(), 0);
  std::vector<bool> selected(s.size(), false);

  std::size_t next = start;
  double next_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < kprime; ++j) {
    t.center_pos.push_back(next);
    t.greedy_distance.push_back(next_dist);
    selected[next] = true;
    const Point& c = s[next];
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = distance(s[i], c, m);
      if (d < t.nearest[i]) {
        t.nearest[i] = d;
        t.nearest_idx[i] = j;
      }
    }
    if (j + 1 == kprime) break;
    // argmax of nearest distance over unselected points; ties to the smaller id
    std::size_t best = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (selected[i]) continue;
      if (best == s.size() || t.nearest[i] > t.nearest[best] ||
          (t.nearest[i] == t.nearest[best] && s[i].id < s[best].id)) {
        best = i;
      }
    }
    next = best;
    next_dist = t.nearest[best];
  }
  return t;
}

}  // namespace

Kernel gmm(std::span<const Point> s, std::size_t kprime, const MetricSpace& m) {
  return gmm_from(s, kprime, 0, m);
}

Kernel gmm_from(std::span<const Point> s, std::size_t kprime, std::size_t start,
                const MetricSpace& m) {
  Traversal t = traverse(s, kprime, m, start);
  Kernel k;
  k.centers.reserve(kprime);
  for (std::size_t pos : t.center_pos) k.centers.push_back(s[pos]);
  k.greedy_distance = std::move(t.greedy_distance);
  return k;
}

Clustering gmm_clusters(std::span<const Point> s, std::size_t kprime, const MetricSpace& m) {
  Traversal t = traverse(s, kprime, m);
  Clustering c;
  c.kernel.centers.reserve(kprime);
  for (std::size_t pos : t.center_pos) c.kernel.centers.push_back(s[pos]);
  c.kernel.greedy_distance = t.greedy_distance;
  c.member_indices.assign(kprime, {});
  std::vector<bool> is_center(s.size(), false);
  for (std::size_t j = 0; j < kprime; ++j) {
    c.member_indices[j].push_back(t.center_pos[j]);
    is_center[t.center_pos[j]] = true;
  }
  c.range = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    c.range = std::max(c.range, t.nearest[i]);
    if (!is_center[i]) c.member_indices[t.nearest_idx[i]].push_back(i);
  }
  return c;
}

namespace {

std::vector<std::vector<std::size_t>> delegate_sets(const Clustering& c,
                                                    std::size_t delegate_cap) {
  std::vector<std::vector<std::size_t>> sets(c.member_indices.size());
  for (std::size_t j = 0; j < c.member_indices.size(); ++j) {
    const auto& members = c.member_indices[j];
    const std::size_t take = std::min(members.size() - 1, delegate_cap);
    sets[j].assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(1 + take));
  }
  return sets;
}

}  // namespace

std::vector<Point> gmm_ext(std::span<const Point> s, std::size_t k, std::size_t kprime,
                           const MetricSpace& m) {
  if (k < 1) raise(ErrorCode::argument, "gmm_ext needs k >= 1");
  return gmm_ext_capped(s, k - 1, kprime, m);
}

std::vector<Point> gmm_ext_capped(std::span<const Point> s, std::size_t delegate_cap,
                                  std::size_t kprime, const MetricSpace& m) {
  const Clustering c = gmm_clusters(s, kprime, m);
  const auto sets = delegate_sets(c, delegate_cap);
  std::vector<Point> out;
  for (const auto& set : sets) {
    for (std::size_t pos : set) out.push_back(s[pos]);
  }
  return out;
}

GeneralizedCoreset gmm_gen(std::span<const Point> s, std::size_t k, std::size_t kprime,
                           const MetricSpace& m) {
  if (k < 1) raise(ErrorCode::argument, "gmm_gen needs k >= 1");
  const Clustering c = gmm_clusters(s, kprime, m);
  const auto sets = delegate_sets(c, k - 1);
  GeneralizedCoreset g;
  g.pairs.reserve(kprime);
  for (std::size_t j = 0; j < kprime; ++j) {
    g.pairs.push_back({c.kernel.centers[j], sets[j].size()});
  }
  return g;
}

}  // namespace divmax
