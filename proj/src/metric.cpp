#include "divmax/metric.hpp"

#include <algorithm>
#include <cmath>

#include "divmax/error.hpp"

namespace divmax {

namespace {

double dense_norm(const std::vector<double>& c) {
  double s = 0.0;
  for (double x : c) s += x * x;
  return std::sqrt(s);
}

double sparse_norm(const std::vector<std::pair<std::uint32_t, double>>& e) {
  double s = 0.0;
  for (const auto& [idx, v] : e) s += v * v;
  return std::sqrt(s);
}

double dense_dot(const Point& p, const Point& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.coords.size(); ++i) s += p.coords[i] * q.coords[i];
  return s;
}

// Iterates the shorter entry list, binary-searching the longer one.
double sparse_dot(const Point& p, const Point& q) {
  const auto& shorter = p.entries.size() <= q.entries.size() ? p.entries : q.entries;
  const auto& longer = p.entries.size() <= q.entries.size() ? q.entries : p.entries;
  double s = 0.0;
  for (const auto& [idx, v] : shorter) {
    auto it = std::lower_bound(longer.begin(), longer.end(), idx,
                               [](const auto& a, std::uint32_t b) { return a.first < b; });
    if (it != longer.end() && it->first == idx) s += v * it->second;
  }
  return s;
}

void check_compatible(const Point& p, const Point& q) {
  if (p.sparse != q.sparse) {
    raise(ErrorCode::shape, "cannot mix dense and sparse points");
  }
  if (!p.sparse && p.coords.size() != q.coords.size()) {
    raise(ErrorCode::shape, "dense dimension mismatch: " + std::to_string(p.coords.size()) +
                                " vs " + std::to_string(q.coords.size()));
  }
}

}  // namespace

Point Point::dense(std::int64_t id, std::vector<double> coords) {
  if (coords.empty()) raise(ErrorCode::argument, "dense point needs at least one coordinate");
  Point p;
  p.id = id;
  p.sparse = false;
  p.coords = std::move(coords);
  p.norm = dense_norm(p.coords);
  return p;
}

Point Point::sparse_counts(std::int64_t id,
                           std::vector<std::pair<std::uint32_t, double>> entries) {
  if (entries.empty()) raise(ErrorCode::argument, "sparse point needs at least one entry");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second <= 0.0) {
      raise(ErrorCode::argument, "sparse counts must be strictly positive");
    }
    if (i > 0 && entries[i].first == entries[i - 1].first) {
      raise(ErrorCode::argument, "duplicate sparse index " + std::to_string(entries[i].first));
    }
  }
  Point p;
  p.id = id;
  p.sparse = true;
  p.entries = std::move(entries);
  p.norm = sparse_norm(p.entries);
  return p;
}

bool Point::same_coords(const Point& other) const {
  if (sparse != other.sparse) return false;
  return sparse ? entries == other.entries : coords == other.coords;
}

double distance(const Point& p, const Point& q, const MetricSpace& m) {
  check_compatible(p, q);
  switch (m.kind) {
    case MetricKind::euclidean: {
      if (!p.sparse) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.coords.size(); ++i) {
          const double d = p.coords[i] - q.coords[i];
          s += d * d;
        }
        return std::sqrt(s);
      }
      // Merge walk over the two sorted entry lists; exact zero for equal points.
      double s = 0.0;
      std::size_t i = 0, j = 0;
      while (i < p.entries.size() || j < q.entries.size()) {
        double d = 0.0;
        if (j >= q.entries.size() ||
            (i < p.entries.size() && p.entries[i].first < q.entries[j].first)) {
          d = p.entries[i++].second;
        } else if (i >= p.entries.size() || q.entries[j].first < p.entries[i].first) {
          d = -q.entries[j++].second;
        } else {
          d = p.entries[i++].second - q.entries[j++].second;
        }
        s += d * d;
      }
      return std::sqrt(s);
    }
    case MetricKind::cosine: {
      if (p.norm <= 0.0 || q.norm <= 0.0) {
        raise(ErrorCode::domain, "cosine distance undefined for zero vector");
      }
      // acos is ill-conditioned near 1, so coincident points are answered
      // exactly rather than through the dot product.
      if (p.same_coords(q)) return 0.0;
      const double dot = p.sparse ? sparse_dot(p, q) : dense_dot(p, q);
      const double c = std::clamp(dot / (p.norm * q.norm), -1.0, 1.0);
      return std::acos(c);
    }
  }
  raise(ErrorCode::internal, "unknown metric kind");
}

double set_distance(const Point& p, std::span<const Point> s, const MetricSpace& m) {
  if (s.empty()) raise(ErrorCode::argument, "set_distance over an empty set");
  double best = distance(p, s[0], m);
  for (std::size_t i = 1; i < s.size(); ++i) {
    best = std::min(best, distance(p, s[i], m));
  }
  return best;
}

}  // namespace divmax
