#include "divmax/data.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "divmax/error.hpp"
#include "divmax/rng.hpp"

namespace divmax {

std::vector<Point> gen_sphere(const DatasetSpec& spec) {
  if (spec.k_planted > spec.n) raise(ErrorCode::argument, "k_planted exceeds n");
  if (spec.dim < 1) raise(ErrorCode::argument, "dim must be at least 1");
  if (spec.inner_radius <= 0.0 || spec.inner_radius >= 1.0) {
    raise(ErrorCode::argument, "inner_radius must lie strictly between 0 and 1");
  }
  Rng rng(spec.seed);
  const auto direction = [&](std::vector<double>& v) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int d = 0; d < spec.dim; ++d) {
        v[static_cast<std::size_t>(d)] = rng.normal();
        norm += v[static_cast<std::size_t>(d)] * v[static_cast<std::size_t>(d)];
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (int d = 0; d < spec.dim; ++d) v[static_cast<std::size_t>(d)] /= norm;
  };
  std::vector<Point> out;
  out.reserve(spec.n);
  std::vector<double> v(static_cast<std::size_t>(spec.dim));
  for (std::size_t i = 0; i < spec.n; ++i) {
    direction(v);
    if (i >= spec.k_planted) {
      const double radius =
          spec.inner_radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(spec.dim));
      for (double& x : v) x *= radius;
    }
    out.push_back(Point::dense(static_cast<std::int64_t>(i), v));
  }
  return out;
}

namespace {

// Whole file through zlib, which reads plain files unchanged and inflates
// gzip ones.
std::string read_all(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) raise(ErrorCode::io, "cannot open " + path);
  std::string content;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(f, buf, sizeof(buf))) > 0) {
    content.append(buf, static_cast<std::size_t>(got));
  }
  const bool failed = got < 0;
  gzclose(f);
  if (failed) raise(ErrorCode::io, "read failure on " + path);
  return content;
}

template <class LineFn>
void for_each_line(const std::string& content, LineFn fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    ++line_no;
    std::string_view line(content.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    pos = end + 1;
  }
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

std::vector<Point> load_dense(const std::string& path) {
  const std::string content = read_all(path);
  std::vector<Point> out;
  std::size_t dim = 0;
  for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (blank(line)) return;
    std::vector<double> coords;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p >= end) break;
      char* after = nullptr;
      const double v = std::strtod(p, &after);
      if (after == p || (after < end && *after != ' ' && *after != '\t')) {
        raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": malformed value");
      }
      coords.push_back(v);
      p = after;
    }
    if (coords.empty()) {
      raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": no values on line");
    }
    if (dim == 0) {
      dim = coords.size();
    } else if (coords.size() != dim) {
      raise(ErrorCode::shape, path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(dim) + " values, found " +
                                  std::to_string(coords.size()));
    }
    out.push_back(Point::dense(static_cast<std::int64_t>(out.size()), std::move(coords)));
  });
  return out;
}

std::vector<Point> load_sparse(const std::string& path, int min_entries) {
  if (min_entries < 1) raise(ErrorCode::argument, "min_entries must be at least 1");
  const std::string content = read_all(path);
  std::vector<Point> out;
  for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (blank(line)) return;
    std::vector<std::pair<std::uint32_t, double>> entries;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p >= end) break;
      if (*p == '-') {
        raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": negative index");
      }
      char* after = nullptr;
      const unsigned long idx = std::strtoul(p, &after, 10);
      if (after == p || after >= end || *after != ':') {
        raise(ErrorCode::parse,
              path + ":" + std::to_string(line_no) + ": expected index:count token");
      }
      p = after + 1;
      const double v = std::strtod(p, &after);
      if (after == p || (after < end && *after != ' ' && *after != '\t')) {
        raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": malformed count");
      }
      if (v <= 0.0) {
        raise(ErrorCode::parse,
              path + ":" + std::to_string(line_no) + ": counts must be positive");
      }
      entries.emplace_back(static_cast<std::uint32_t>(idx), v);
      p = after;
    }
    if (entries.size() < static_cast<std::size_t>(min_entries)) return;  // filtered out
    try {
      out.push_back(
          Point::sparse_counts(static_cast<std::int64_t>(out.size()), std::move(entries)));
    } catch (const Error& e) {
      raise(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

void save_dense(const std::string& path, std::span<const Point> points) {
  std::ofstream f(path);
  if (!f) raise(ErrorCode::io, "cannot write " + path);
  char buf[64];
  for (const Point& p : points) {
    if (p.sparse) raise(ErrorCode::shape, "save_dense given a sparse point");
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.coords[i]);
      if (i > 0) f << ' ';
      f << buf;
    }
    f << '\n';
  }
  if (!f.good()) raise(ErrorCode::io, "write failure on " + path);
}

void save_sparse(const std::string& path, std::span<const Point> points) {
  std::ofstream f(path);
  if (!f) raise(ErrorCode::io, "cannot write " + path);
  char buf[80];
  for (const Point& p : points) {
    if (!p.sparse) raise(ErrorCode::shape, "save_sparse given a dense point");
    for (std::size_t i = 0; i < p.entries.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%u:%.17g", p.entries[i].first, p.entries[i].second);
      if (i > 0) f << ' ';
      f << buf;
    }
    f << '\n';
  }
  if (!f.good()) raise(ErrorCode::io, "write failure on " + path);
}

}  // namespace divmax
