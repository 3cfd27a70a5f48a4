#include "divmax/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "divmax/error.hpp"

namespace divmax {

namespace {

std::uint64_t binomial_guarded(std::size_t n, std::size_t k) {
  if (k > n) raise(ErrorCode::argument, "oracle: k exceeds |S|");
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 2.0 * static_cast<double>(kOracleGuard)) {
      raise(ErrorCode::argument, "oracle refused: C(" + std::to_string(n) + "," +
                                     std::to_string(k) + ") exceeds the guard of " +
                                     std::to_string(kOracleGuard) + " subsets");
    }
  }
  const auto count = static_cast<std::uint64_t>(c + 0.5);
  if (count > kOracleGuard) {
    raise(ErrorCode::argument, "oracle refused: C(" + std::to_string(n) + "," +
                                   std::to_string(k) + ") = " + std::to_string(count) +
                                   " exceeds the guard of " + std::to_string(kOracleGuard));
  }
  return count;
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

// Points sorted by id so that combinations run in lexicographic id order.
std::vector<Point> by_id(std::span<const Point> s) {
  std::vector<Point> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Point& a, const Point& b) { return a.id < b.id; });
  return sorted;
}

template <class Eval, class Better>
double enumerate_subsets(std::span<const Point> s, std::size_t k, Eval eval, Better better,
                         std::vector<Point>* witness) {
  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), 0);
  std::vector<Point> subset(k);
  double best = 0.0;
  bool first = true;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = s[comb[i]];
    const double v = eval(subset);
    if (first || better(v, best)) {
      best = v;
      if (witness) *witness = subset;
      first = false;
    }
    if (!next_combination(comb, s.size())) break;
  }
  return best;
}

}  // namespace

OracleResult brute_force(DiversityKind kind, std::span<const Point> s, std::size_t k,
                         const MetricSpace& m) {
  if (k < 2) raise(ErrorCode::argument, "oracle needs k >= 2");
  if ((kind == DiversityKind::remote_cycle && k > kCycleExactMax) ||
      (kind == DiversityKind::remote_bipartition && k > kBipartitionExactMax)) {
    raise(ErrorCode::argument,
          std::string("oracle refused: no exact evaluator for ") + kind_name(kind) +
              " at k = " + std::to_string(k));
  }
  OracleResult r;
  r.subsets_examined = binomial_guarded(s.size(), k);
  const std::vector<Point> sorted = by_id(s);
  r.value = enumerate_subsets(
      sorted, k, [&](const std::vector<Point>& sub) { return evaluate(kind, sub, m).value; },
      [](double v, double best) { return v > best; }, &r.witness);
  return r;
}

double min_range_exhaustive(std::span<const Point> s, std::size_t k, const MetricSpace& m) {
  if (k < 1 || k > s.size()) raise(ErrorCode::argument, "min_range: k out of range");
  binomial_guarded(s.size(), k);
  const std::vector<Point> sorted = by_id(s);
  return enumerate_subsets(
      sorted, k, [&](const std::vector<Point>& sub) { return range_of(sub, sorted, m); },
      [](double v, double best) { return v < best; }, nullptr);
}

double max_farness_exhaustive(std::span<const Point> s, std::size_t k, const MetricSpace& m) {
  if (k < 2 || k > s.size()) raise(ErrorCode::argument, "max_farness: k out of range");
  binomial_guarded(s.size(), k);
  const std::vector<Point> sorted = by_id(s);
  return enumerate_subsets(
      sorted, k, [&](const std::vector<Point>& sub) { return farness_of(sub, m); },
      [](double v, double best) { return v > best; }, nullptr);
}

}  // namespace divmax
