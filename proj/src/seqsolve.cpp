#include "divmax/seqsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divmax/error.hpp"

namespace divmax {

namespace {

std::vector<Point> matching_selection(std::span<const Point> s, std::size_t k,
                                      const MetricSpace& m) {
  const DistanceMatrix d = pairwise_distances(s, m);
  std::vector<bool> taken(s.size(), false);
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  for (std::size_t round = 0; round < k / 2; ++round) {
    std::size_t bi = s.size(), bj = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (taken[i]) continue;
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (taken[j]) continue;
        const bool better =
            bi == s.size() || d.at(i, j) > d.at(bi, bj) ||
            (d.at(i, j) == d.at(bi, bj) &&
             std::minmax(s[i].id, s[j].id) < std::minmax(s[bi].id, s[bj].id));
        if (better) {
          bi = i;
          bj = j;
        }
      }
    }
    taken[bi] = taken[bj] = true;
    chosen.push_back(bi);
    chosen.push_back(bj);
  }
  if (k % 2 == 1) {
    // Off pair: the point with the largest summed distance to the chosen set.
    std::size_t best = s.size();
    double best_sum = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (taken[i]) continue;
      double sum = 0.0;
      for (std::size_t c : chosen) sum += d.at(i, c);
      if (best == s.size() || sum > best_sum || (sum == best_sum && s[i].id < s[best].id)) {
        best = i;
        best_sum = sum;
      }
    }
    chosen.push_back(best);
  }
  std::vector<Point> out;
  out.reserve(k);
  for (std::size_t i : chosen) out.push_back(s[i]);
  return out;
}

double evaluation_cost_estimate(DiversityKind kind, std::size_t k) {
  const double kk = static_cast<double>(k);
  switch (kind) {
    case DiversityKind::remote_cycle:
      return k <= kCycleExactMax ? std::ldexp(kk * kk, static_cast<int>(k)) : 200.0 * kk * kk;
    case DiversityKind::remote_bipartition: {
      if (k > kBipartitionExactMax) return 200.0 * kk * kk;
      double splits = 1.0;
      for (std::size_t i = 1; i <= k / 2; ++i) {
        splits = splits * static_cast<double>(k / 2 + i) / static_cast<double>(i);
      }
      return splits * kk * kk;
    }
    default:
      return kk * kk;
  }
}

// Farthest-point traversal from several start points, keeping the selection
// that scores best under the measure. Every start yields the guarantee of the
// single-start greedy, so taking the maximum preserves it; the start stride
// keeps the total work within a fixed distance-evaluation budget.
std::vector<Point> greedy_selection(DiversityKind kind, std::span<const Point> s,
                                    std::size_t k, const MetricSpace& m) {
  const double budget = 2e7;
  const double per_start =
      static_cast<double>(s.size()) * static_cast<double>(k) + evaluation_cost_estimate(kind, k);
  const auto starts = std::clamp<std::size_t>(static_cast<std::size_t>(budget / per_start),
                                              1, s.size());
  const std::size_t stride = std::max<std::size_t>(1, s.size() / starts);
  std::vector<Point> best;
  double best_value = -1.0;
  for (std::size_t pos = 0; pos < s.size(); pos += stride) {
    std::vector<Point> cand = gmm_from(s, k, pos, m).centers;
    const double v = evaluate(kind, cand, m).value;
    if (v > best_value) {
      best_value = v;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace

Solution solve_sequential(DiversityKind kind, std::span<const Point> s, std::size_t k,
                          const MetricSpace& m) {
  if (k < 2) raise(ErrorCode::argument, "solve_sequential needs k >= 2");
  if (k > s.size()) {
    raise(ErrorCode::argument, "solve_sequential: k = " + std::to_string(k) +
                                   " exceeds |S| = " + std::to_string(s.size()));
  }
  Solution sol;
  sol.kind = kind;
  sol.alpha = alpha_of(kind);
  sol.points = (kind == DiversityKind::remote_clique) ? matching_selection(s, k, m)
                                                      : greedy_selection(kind, s, k, m);
  sol.value = evaluate(kind, sol.points, m);
  return sol;
}

namespace {

DistanceMatrix pair_distances(const GeneralizedCoreset& t, const MetricSpace& m) {
  DistanceMatrix d(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      d.set(i, j, distance(t.pairs[i].point, t.pairs[j].point, m));
    }
  }
  return d;
}

// Farthest-pair matching at pair granularity: replicas of an already-used
// point stay available as distance-0 candidates.
std::vector<std::size_t> generalized_matching(const GeneralizedCoreset& t, std::size_t k,
                                              const DistanceMatrix& d) {
  const std::size_t n = t.size();
  std::vector<std::size_t> remaining(n), chosen(n, 0);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = t.pairs[i].multiplicity;
  for (std::size_t round = 0; round < k / 2; ++round) {
    std::size_t bi = n, bj = n;
    double best = -1.0;
    const auto consider = [&](std::size_t i, std::size_t j, double dist) {
      const bool better =
          bi == n || dist > best ||
          (dist == best && std::minmax(t.pairs[i].point.id, t.pairs[j].point.id) <
                               std::minmax(t.pairs[bi].point.id, t.pairs[bj].point.id));
      if (better) {
        bi = i;
        bj = j;
        best = dist;
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] == 0) continue;
      if (remaining[i] >= 2) consider(i, i, 0.0);  // two replicas of the same point
      for (std::size_t j = i + 1; j < n; ++j) {
        if (remaining[j] != 0) consider(i, j, d.at(i, j));
      }
    }
    if (bi == bj) {
      remaining[bi] -= 2;
      chosen[bi] += 2;
    } else {
      --remaining[bi];
      --remaining[bj];
      ++chosen[bi];
      ++chosen[bj];
    }
  }
  if (k % 2 == 1) {
    std::size_t best = n;
    double best_sum = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] == 0) continue;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sum += static_cast<double>(chosen[j]) * d.at(i, j);
      }
      if (best == n || sum > best_sum ||
          (sum == best_sum && t.pairs[i].point.id < t.pairs[best].point.id)) {
        best = i;
        best_sum = sum;
      }
    }
    ++chosen[best];
  }
  return chosen;
}

// Greedy k-center over the expansion, at pair granularity: a pair with a
// chosen replica offers further replicas at distance 0, so positive-distance
// points are exhausted before any replica is taken.
std::vector<std::size_t> generalized_gmm(const GeneralizedCoreset& t, std::size_t k,
                                         const DistanceMatrix& d) {
  const std::size_t n = t.size();
  std::vector<std::size_t> remaining(n), chosen(n, 0);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = t.pairs[i].multiplicity;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  std::size_t first = 0;  // first pair in input order
  chosen[first] = 1;
  --remaining[first];
  for (std::size_t i = 0; i < n; ++i) nearest[i] = d.at(i, first);
  for (std::size_t taken = 1; taken < k; ++taken) {
    std::size_t best = n;
    double best_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] == 0) continue;
      const double dist = chosen[i] > 0 ? 0.0 : nearest[i];
      if (best == n || dist > best_dist ||
          (dist == best_dist && t.pairs[i].point.id < t.pairs[best].point.id)) {
        best = i;
        best_dist = dist;
      }
    }
    ++chosen[best];
    --remaining[best];
    if (best_dist > 0.0) {
      for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d.at(i, best));
    }
  }
  return chosen;
}

}  // namespace

double gendiv(DiversityKind kind, const GeneralizedCoreset& t, const MetricSpace& m) {
  const std::size_t total = t.expanded_size();
  if (total < 2) raise(ErrorCode::argument, "gendiv needs expanded size >= 2");
  const DistanceMatrix base = pair_distances(t, m);
  DistanceMatrix expanded(total);
  std::vector<std::size_t> owner(total);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t r = 0; r < t.pairs[i].multiplicity; ++r) owner[pos++] = i;
  }
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      expanded.set(a, b, owner[a] == owner[b] ? 0.0 : base.at(owner[a], owner[b]));
    }
  }
  return evaluate_matrix(kind, expanded).value;
}

GeneralizedCoreset solve_generalized(DiversityKind kind, const GeneralizedCoreset& t,
                                     std::size_t k, const MetricSpace& m) {
  if (!uses_delegates(kind)) {
    raise(ErrorCode::argument, std::string("solve_generalized does not support ") +
                                   kind_name(kind));
  }
  if (t.expanded_size() < k) {
    raise(ErrorCode::argument, "solve_generalized: m(T) = " +
                                   std::to_string(t.expanded_size()) + " is below k = " +
                                   std::to_string(k));
  }
  if (k < 2) raise(ErrorCode::argument, "solve_generalized needs k >= 2");
  const DistanceMatrix d = pair_distances(t, m);
  const std::vector<std::size_t> chosen = kind == DiversityKind::remote_clique
                                              ? generalized_matching(t, k, d)
                                              : generalized_gmm(t, k, d);
  GeneralizedCoreset out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (chosen[i] > 0) out.pairs.push_back({t.pairs[i].point, chosen[i]});
  }
  return out;
}

}  // namespace divmax
