#include "divmax/diversity.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "divmax/error.hpp"

namespace divmax {

double alpha_of(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::remote_edge: return 2.0;
    case DiversityKind::remote_clique: return 2.0;
    case DiversityKind::remote_star: return 2.0;
    case DiversityKind::remote_bipartition: return 3.0;
    case DiversityKind::remote_tree: return 4.0;
    case DiversityKind::remote_cycle: return 3.0;
  }
  raise(ErrorCode::internal, "unknown diversity kind");
}

bool uses_delegates(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::remote_clique:
    case DiversityKind::remote_star:
    case DiversityKind::remote_bipartition:
    case DiversityKind::remote_tree:
      return true;
    default:
      return false;
  }
}

const char* kind_name(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::remote_edge: return "remote-edge";
    case DiversityKind::remote_clique: return "remote-clique";
    case DiversityKind::remote_star: return "remote-star";
    case DiversityKind::remote_bipartition: return "remote-bipartition";
    case DiversityKind::remote_tree: return "remote-tree";
    case DiversityKind::remote_cycle: return "remote-cycle";
  }
  raise(ErrorCode::internal, "unknown diversity kind");
}

DiversityKind kind_from_name(const std::string& s) {
  if (s == "remote-edge") return DiversityKind::remote_edge;
  if (s == "remote-clique") return DiversityKind::remote_clique;
  if (s == "remote-star") return DiversityKind::remote_star;
  if (s == "remote-bipartition") return DiversityKind::remote_bipartition;
  if (s == "remote-tree") return DiversityKind::remote_tree;
  if (s == "remote-cycle") return DiversityKind::remote_cycle;
  raise(ErrorCode::argument, "unknown diversity measure: " + s);
}

DistanceMatrix pairwise_distances(std::span<const Point> s, const MetricSpace& m) {
  DistanceMatrix d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      d.set(i, j, distance(s[i], s[j], m));
    }
  }
  return d;
}

namespace {

double min_pairwise(const DistanceMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      best = std::min(best, d.at(i, j));
    }
  }
  return best;
}

double sum_pairwise(const DistanceMatrix& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      s += d.at(i, j);
    }
  }
  return s;
}

double star_value(const DistanceMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < d.size(); ++c) {
    double s = 0.0;
    for (std::size_t q = 0; q < d.size(); ++q) s += d.at(c, q);
    best = std::min(best, s);
  }
  return best;
}

double mst_weight(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<bool> used(n, false);
  key[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!used[v] && (u == n || key[v] < key[u])) u = v;
    }
    used[u] = true;
    total += key[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (!used[v]) key[v] = std::min(key[v], d.at(u, v));
    }
  }
  return total;
}

double cut_weight(const DistanceMatrix& d, const std::vector<bool>& in_q) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!in_q[i]) continue;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (!in_q[j]) s += d.at(i, j);
    }
  }
  return s;
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t m = c.size();
  std::size_t i = m;
  while (i > 0) {
    --i;
    if (c[i] < n - m + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

EvalReport bipartition_value(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  const std::size_t q = n / 2;
  if (n <= kBipartitionExactMax) {
    // Enumerate all balanced splits. For even n the two sides are
    // interchangeable, so point 0 is pinned to Q and only the remaining
    // q-1 members are chosen from indices 1..n-1.
    const bool pin_first = (n % 2 == 0);
    const std::size_t free_slots = pin_first ? q - 1 : q;
    const std::size_t free_n = pin_first ? n - 1 : n;
    std::vector<std::size_t> free_comb(free_slots);
    std::iota(free_comb.begin(), free_comb.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> in_q(n, false);
    while (true) {
      std::fill(in_q.begin(), in_q.end(), false);
      if (pin_first) in_q[0] = true;
      for (std::size_t idx : free_comb) in_q[pin_first ? idx + 1 : idx] = true;
      best = std::min(best, cut_weight(d, in_q));
      if (free_comb.empty() || !next_combination(free_comb, free_n)) break;
    }
    return {best, true};
  }
  // Swap-based local search from the first floor(n/2) points.
  std::vector<bool> in_q(n, false);
  for (std::size_t i = 0; i < q; ++i) in_q[i] = true;
  double cur = cut_weight(d, in_q);
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 1000) {
    improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_q[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_q[j]) continue;
        in_q[i] = false;
        in_q[j] = true;
        const double cand = cut_weight(d, in_q);
        if (cand < cur - 1e-15) {
          cur = cand;
          improved = true;
        } else {
          in_q[i] = true;
          in_q[j] = false;
        }
      }
    }
  }
  return {cur, false};
}

double held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n == 2) return 2.0 * d.at(0, 1);
  const std::size_t m = n - 1;  // nodes 1..n-1, tours anchored at 0
  const std::size_t full = std::size_t{1} << m;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full * m, inf);
  for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = d.at(0, j + 1);
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double cur = dp[mask * m + j];
      if (cur == inf) continue;
      for (std::size_t t = 0; t < m; ++t) {
        if (mask & (std::size_t{1} << t)) continue;
        const std::size_t nmask = mask | (std::size_t{1} << t);
        double& slot = dp[nmask * m + t];
        slot = std::min(slot, cur + d.at(j + 1, t + 1));
      }
    }
  }
  double best = inf;
  for (std::size_t j = 0; j < m; ++j) {
    best = std::min(best, dp[(full - 1) * m + j] + d.at(j + 1, 0));
  }
  return best;
}

double tour_weight(const DistanceMatrix& d, const std::vector<std::size_t>& tour) {
  double s = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    s += d.at(tour[i], tour[(i + 1) % tour.size()]);
  }
  return s;
}

EvalReport cycle_value(const DistanceMatrix& d) {
  if (d.size() <= kCycleExactMax) return {held_karp(d), true};
  // Nearest neighbour start + 2-opt.
  const std::size_t n = d.size();
  std::vector<std::size_t> tour;
  std::vector<bool> used(n, false);
  tour.push_back(0);
  used[0] = true;
  while (tour.size() < n) {
    const std::size_t last = tour.back();
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!used[v] && (best == n || d.at(last, v) < d.at(last, best))) best = v;
    }
    used[best] = true;
    tour.push_back(best);
  }
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 1000) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const std::size_t a = tour[i], b = tour[i + 1];
        const std::size_t c = tour[j], e = tour[(j + 1) % n];
        const double delta = d.at(a, c) + d.at(b, e) - d.at(a, b) - d.at(c, e);
        if (delta < -1e-15) {
          std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return {tour_weight(d, tour), false};
}

}  // namespace

EvalReport evaluate_matrix(DiversityKind kind, const DistanceMatrix& d) {
  if (d.size() < 2) raise(ErrorCode::argument, "diversity needs at least two points");
  switch (kind) {
    case DiversityKind::remote_edge: return {min_pairwise(d), true};
    case DiversityKind::remote_clique: return {sum_pairwise(d), true};
    case DiversityKind::remote_star: return {star_value(d), true};
    case DiversityKind::remote_bipartition: return bipartition_value(d);
    case DiversityKind::remote_tree: return {mst_weight(d), true};
    case DiversityKind::remote_cycle: return cycle_value(d);
  }
  raise(ErrorCode::internal, "unknown diversity kind");
}

EvalReport evaluate(DiversityKind kind, std::span<const Point> s, const MetricSpace& m) {
  if (s.size() < 2) raise(ErrorCode::argument, "diversity needs at least two points");
  return evaluate_matrix(kind, pairwise_distances(s, m));
}

double range_of(std::span<const Point> t, std::span<const Point> s, const MetricSpace& m) {
  if (t.empty()) raise(ErrorCode::argument, "range of an empty set");
  std::unordered_set<std::int64_t> s_ids;
  for (const Point& p : s) s_ids.insert(p.id);
  std::unordered_set<std::int64_t> t_ids;
  for (const Point& p : t) {
    if (!s_ids.count(p.id)) raise(ErrorCode::argument, "range: T is not a subset of S");
    t_ids.insert(p.id);
  }
  double worst = 0.0;  // max over the empty set is 0 by convention
  for (const Point& p : s) {
    if (t_ids.count(p.id)) continue;
    worst = std::max(worst, set_distance(p, t, m));
  }
  return worst;
}

double farness_of(std::span<const Point> t, const MetricSpace& m) {
  if (t.size() < 2) raise(ErrorCode::argument, "farness needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      best = std::min(best, distance(t[i], t[j], m));
    }
  }
  return best;
}

}  // namespace divmax
