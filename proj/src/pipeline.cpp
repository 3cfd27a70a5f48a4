#include "divmax/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "divmax/error.hpp"
#include "divmax/rng.hpp"

namespace divmax {

const char* partitioning_name(Partitioning p) {
  switch (p) {
    case Partitioning::contiguous: return "contiguous";
    case Partitioning::random: return "random";
    case Partitioning::adversarial: return "adversarial";
  }
  raise(ErrorCode::internal, "unknown partitioning");
}

Partitioning partitioning_from_name(const std::string& s) {
  if (s == "contiguous") return Partitioning::contiguous;
  if (s == "random") return Partitioning::random;
  if (s == "adversarial") return Partitioning::adversarial;
  raise(ErrorCode::argument, "unknown partitioning: " + s);
}

std::size_t RoundTrace::aggregate_output(int round) const {
  std::size_t total = 0;
  for (const auto& r : rows) {
    if (r.round == round) total += r.output_size;
  }
  return total;
}

std::string RoundTrace::to_csv(bool timing) const {
  std::string out = "round,partition,input_size,output_size,millis\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%zu,%zu,%zu,%.3f\n", r.round, r.partition, r.input_size,
                  r.output_size, timing ? r.millis : 0.0);
    out += buf;
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Partitions {
  std::vector<Point> storage;  // reordered copy; empty when slicing the input
  std::vector<std::span<const Point>> parts;
};

double adversarial_key(const Point& p) {
  if (!p.sparse) return p.coords[0];
  // Fixed pseudo-random projection so sparse inputs sort stably too.
  double s = 0.0;
  for (const auto& [idx, v] : p.entries) {
    s += v * (static_cast<double>(splitmix64(idx) >> 11) * 0x1.0p-53);
  }
  return s;
}

std::vector<std::span<const Point>> slice(std::span<const Point> s, std::size_t ell) {
  std::vector<std::span<const Point>> parts;
  parts.reserve(ell);
  const std::size_t base = s.size() / ell;
  const std::size_t extra = s.size() % ell;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < ell; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    parts.push_back(s.subspan(offset, len));
    offset += len;
  }
  return parts;
}

Partitions make_partitions(std::span<const Point> s, std::size_t ell, Partitioning mode,
                           std::uint64_t seed) {
  if (ell < 1) raise(ErrorCode::config, "need at least one partition");
  if (s.size() < ell) raise(ErrorCode::config, "fewer points than partitions");
  Partitions p;
  switch (mode) {
    case Partitioning::contiguous:
      p.parts = slice(s, ell);
      return p;
    case Partitioning::random: {
      p.storage.assign(s.begin(), s.end());
      Rng rng(seed);
      rng.shuffle(p.storage);
      p.parts = slice(p.storage, ell);
      return p;
    }
    case Partitioning::adversarial: {
      p.storage.assign(s.begin(), s.end());
      std::sort(p.storage.begin(), p.storage.end(), [](const Point& a, const Point& b) {
        const double ka = adversarial_key(a), kb = adversarial_key(b);
        return ka < kb || (ka == kb && a.id < b.id);
      });
      p.parts = slice(p.storage, ell);
      return p;
    }
  }
  raise(ErrorCode::internal, "unknown partitioning");
}

/// Runs fn(0..n-1) on up to `threads` workers; exceptions are rethrown on the
/// calling thread.
void parallel_tasks(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::size_t mr_kprime(const PipelineConfig& cfg, bool delegates, std::size_t part_size) {
  if (cfg.strict) {
    const double base = delegates ? 16.0 : 8.0;
    const double eps_prime = cfg.epsilon / (1.0 + cfg.epsilon);
    double v = std::pow(base / eps_prime, static_cast<double>(cfg.ddim)) *
               static_cast<double>(cfg.k);
    v = std::min(v, 1e12);
    // The derived size is an upper bound on what the guarantee needs; a
    // partition smaller than it simply becomes its own core-set.
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(v)), cfg.k, part_size);
  }
  const std::size_t kp = cfg.kprime == 0 ? 8 * cfg.k : cfg.kprime;
  if (kp > part_size) {
    raise(ErrorCode::config, "partition of " + std::to_string(part_size) +
                                 " points is smaller than kprime = " + std::to_string(kp));
  }
  return kp;
}

void validate_common(std::span<const Point> s, const PipelineConfig& cfg) {
  if (cfg.k < 2) raise(ErrorCode::argument, "pipeline needs k >= 2");
  if (cfg.ell < 1) raise(ErrorCode::config, "pipeline needs ell >= 1");
  if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0) {
    raise(ErrorCode::argument, "pipeline needs 0 < epsilon <= 1");
  }
  if (s.size() < cfg.ell * cfg.k) {
    raise(ErrorCode::config, "input of " + std::to_string(s.size()) +
                                 " points cannot feed " + std::to_string(cfg.ell) +
                                 " partitions of at least k = " + std::to_string(cfg.k));
  }
}

void check_partition_sizes(const Partitions& parts, std::size_t k) {
  for (const auto& part : parts.parts) {
    if (part.size() < k) {
      raise(ErrorCode::config, "partition of " + std::to_string(part.size()) +
                                   " points is smaller than k = " + std::to_string(k));
    }
  }
}

// Shared skeleton of the deterministic and randomized 2-round runs.
MrResult two_round_impl(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                        const MetricSpace& m, Partitioning mode, bool capped,
                        std::size_t delegate_cap) {
  validate_common(s, cfg);
  const Partitions parts = make_partitions(s, cfg.ell, mode, cfg.seed);
  check_partition_sizes(parts, cfg.k);

  std::vector<std::vector<Point>> cores(cfg.ell);
  std::vector<RoundTraceRow> round1(cfg.ell);
  parallel_tasks(cfg.ell, cfg.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    const auto part = parts.parts[i];
    const std::size_t kp = mr_kprime(cfg, uses_delegates(kind), part.size());
    if (uses_delegates(kind)) {
      cores[i] = capped ? gmm_ext_capped(part, delegate_cap, kp, m)
                        : gmm_ext(part, cfg.k, kp, m);
    } else {
      cores[i] = gmm(part, kp, m).centers;
    }
    round1[i] = {1, i, part.size(), cores[i].size(), elapsed_ms(start)};
  });

  MrResult r;
  r.trace.rows = std::move(round1);
  for (const auto& c : cores) r.aggregate.insert(r.aggregate.end(), c.begin(), c.end());
  const auto start = Clock::now();
  r.solution = solve_sequential(kind, r.aggregate, cfg.k, m);
  r.trace.rows.push_back({2, 0, r.aggregate.size(), cfg.k, elapsed_ms(start)});
  r.solution.seed = cfg.seed;
  return r;
}

}  // namespace

MrResult mr_two_round(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                      const MetricSpace& m) {
  return two_round_impl(s, kind, cfg, m, cfg.partitioning, false, 0);
}

MrResult mr_randomized(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                       const MetricSpace& m) {
  if (!uses_delegates(kind)) {
    raise(ErrorCode::argument,
          std::string("the randomized pipeline does not support ") + kind_name(kind));
  }
  const double n = static_cast<double>(s.size());
  const double per_cluster = std::max(std::log(n), static_cast<double>(cfg.k) /
                                                       static_cast<double>(cfg.ell));
  // With random keys a cluster holds O(max(log n, k/ell)) optimum points
  // w.h.p., so the delegate cap drops from k-1 to that many.
  const auto cap = std::min<std::size_t>(
      cfg.k - 1, static_cast<std::size_t>(std::ceil(cfg.rand_cap_c * per_cluster)));
  return two_round_impl(s, kind, cfg, m, Partitioning::random, true, cap);
}

MrResult mr_multi_round(std::span<const Point> s, DiversityKind kind, const PipelineConfig& cfg,
                        const MetricSpace& m) {
  if (cfg.k < 2) raise(ErrorCode::argument, "pipeline needs k >= 2");
  if (cfg.gamma <= 0.0 || cfg.gamma > 1.0 / 3.0) {
    raise(ErrorCode::argument, "multi-round needs gamma in (0, 1/3]");
  }
  if (cfg.memory_budget == 0) raise(ErrorCode::config, "multi-round needs a memory budget");
  if (cfg.memory_budget < cfg.k) {
    raise(ErrorCode::config, "memory budget below k cannot hold a solution");
  }
  const double rounds_bound = (1.0 - cfg.gamma) / cfg.gamma;
  const int max_levels = static_cast<int>(std::ceil(rounds_bound));
  // Split epsilon across the levels so the compounded loss stays within
  // alpha + epsilon.
  const double eps_level =
      cfg.epsilon / (alpha_of(kind) * (std::pow(2.0, rounds_bound) - 1.0));

  MrResult r;
  std::vector<Point> current(s.begin(), s.end());
  int level = 1;
  while (current.size() > cfg.memory_budget) {
    if (level > max_levels) {
      raise(ErrorCode::config,
            "memory budget unsatisfiable: after " + std::to_string(max_levels) +
                " core-set rounds the aggregate still holds " +
                std::to_string(current.size()) + " points; raise the budget to at least " +
                std::to_string(current.size()));
    }
    const std::size_t ell =
        (current.size() + cfg.memory_budget - 1) / cfg.memory_budget;
    PipelineConfig level_cfg = cfg;
    level_cfg.ell = ell;
    level_cfg.epsilon = std::min(eps_level, 1.0);
    level_cfg.seed = cfg.seed + static_cast<std::uint64_t>(level);
    if (current.size() < ell * cfg.k) {
      raise(ErrorCode::config, "memory budget unsatisfiable: level " + std::to_string(level) +
                                   " would need partitions smaller than k");
    }
    const Partitions parts = make_partitions(current, ell, cfg.partitioning, level_cfg.seed);
    check_partition_sizes(parts, cfg.k);
    std::vector<std::vector<Point>> cores(ell);
    std::vector<RoundTraceRow> rows(ell);
    parallel_tasks(ell, cfg.threads, [&](std::size_t i) {
      const auto start = Clock::now();
      const auto part = parts.parts[i];
      std::size_t kp;
      if (cfg.strict) {
        kp = mr_kprime(level_cfg, uses_delegates(kind), part.size());
      } else {
        // ell is derived, not user-chosen, so the configured kprime is
        // clamped to the shrinking level sizes instead of erroring.
        kp = std::clamp<std::size_t>(cfg.kprime == 0 ? 8 * cfg.k : cfg.kprime, cfg.k,
                                     part.size());
      }
      cores[i] = uses_delegates(kind) ? gmm_ext(part, cfg.k, kp, m) : gmm(part, kp, m).centers;
      rows[i] = {level, i, part.size(), cores[i].size(), elapsed_ms(start)};
    });
    std::vector<Point> next;
    for (const auto& c : cores) next.insert(next.end(), c.begin(), c.end());
    for (auto& row : rows) r.trace.rows.push_back(row);
    if (next.size() >= current.size() && current.size() > cfg.memory_budget) {
      raise(ErrorCode::config,
            "memory budget unsatisfiable: a core-set round cannot shrink " +
                std::to_string(current.size()) + " points below the budget of " +
                std::to_string(cfg.memory_budget) + "; raise the budget to at least " +
                std::to_string(next.size()));
    }
    current = std::move(next);
    ++level;
  }
  const auto start = Clock::now();
  r.solution = solve_sequential(kind, current, cfg.k, m);
  r.trace.rows.push_back({level, 0, current.size(), cfg.k, elapsed_ms(start)});
  r.aggregate = std::move(current);
  r.solution.seed = cfg.seed;
  return r;
}

MrResult mr_three_round_gen(std::span<const Point> s, DiversityKind kind,
                            const PipelineConfig& cfg, const MetricSpace& m) {
  if (!uses_delegates(kind)) {
    raise(ErrorCode::argument,
          std::string("the generalized pipeline does not support ") + kind_name(kind));
  }
  validate_common(s, cfg);
  const Partitions parts = make_partitions(s, cfg.ell, cfg.partitioning, cfg.seed);
  check_partition_sizes(parts, cfg.k);

  // Round 1: per-partition generalized core-sets. Only the (point,
  // multiplicity) pairs and the kernel range travel to round 2.
  std::vector<GeneralizedCoreset> gens(cfg.ell);
  std::vector<double> ranges(cfg.ell, 0.0);
  std::vector<RoundTraceRow> round1(cfg.ell);
  parallel_tasks(cfg.ell, cfg.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    const auto part = parts.parts[i];
    const std::size_t kp = mr_kprime(cfg, true, part.size());
    const Clustering c = gmm_clusters(part, kp, m);
    ranges[i] = c.range;
    GeneralizedCoreset g;
    g.pairs.reserve(kp);
    for (std::size_t j = 0; j < c.member_indices.size(); ++j) {
      const std::size_t members = c.member_indices[j].size();
      const std::size_t mult = 1 + std::min(members - 1, cfg.k - 1);
      g.pairs.push_back({c.kernel.centers[j], mult});
    }
    gens[i] = std::move(g);
    round1[i] = {1, i, part.size(), gens[i].size(), elapsed_ms(start)};
  });

  MrResult r;
  r.trace.rows = std::move(round1);

  // Round 2: aggregate the pairs and solve down to expanded size k.
  const auto start2 = Clock::now();
  GeneralizedCoreset aggregate;
  std::unordered_map<std::int64_t, std::size_t> owner_partition;
  for (std::size_t i = 0; i < cfg.ell; ++i) {
    for (const auto& pr : gens[i].pairs) {
      owner_partition.emplace(pr.point.id, i);
      aggregate.pairs.push_back(pr);
    }
  }
  double kernel_range = 0.0;
  for (double x : ranges) kernel_range = std::max(kernel_range, x);
  const GeneralizedCoreset solved = solve_generalized(kind, aggregate, cfg.k, m);
  r.trace.rows.push_back({2, 0, aggregate.size(), solved.size(), elapsed_ms(start2)});
  r.aggregate_pairs = aggregate;

  // Round 3: each partition instantiates its own pairs by re-deriving the
  // clustering and handing out the first m_p cluster members.
  std::vector<std::vector<std::size_t>> owned(cfg.ell);  // indices into solved.pairs
  for (std::size_t pi = 0; pi < solved.pairs.size(); ++pi) {
    const auto it = owner_partition.find(solved.pairs[pi].point.id);
    if (it == owner_partition.end()) {
      raise(ErrorCode::internal, "solved pair does not belong to any partition");
    }
    owned[it->second].push_back(pi);
  }
  std::vector<std::vector<Point>> delegates(solved.pairs.size());
  std::vector<RoundTraceRow> round3(cfg.ell);
  std::vector<double> radii(cfg.ell, 0.0);
  parallel_tasks(cfg.ell, cfg.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    const auto part = parts.parts[i];
    std::size_t produced = 0;
    if (!owned[i].empty()) {
      const std::size_t kp = mr_kprime(cfg, true, part.size());
      const Clustering c = gmm_clusters(part, kp, m);
      std::unordered_map<std::int64_t, std::size_t> center_index;
      for (std::size_t j = 0; j < c.kernel.centers.size(); ++j) {
        center_index.emplace(c.kernel.centers[j].id, j);
      }
      for (const std::size_t pi : owned[i]) {
        const auto& pr = solved.pairs[pi];
        const auto it = center_index.find(pr.point.id);
        if (it == center_index.end()) {
          raise(ErrorCode::internal, "instantiation lost kernel point " +
                                         std::to_string(pr.point.id));
        }
        const auto& members = c.member_indices[it->second];
        if (members.size() < pr.multiplicity) {
          raise(ErrorCode::internal, "instantiation infeasible: cluster of " +
                                         std::to_string(members.size()) +
                                         " cannot yield " + std::to_string(pr.multiplicity) +
                                         " delegates");
        }
        for (std::size_t d = 0; d < pr.multiplicity; ++d) {
          const Point& q = part[members[d]];
          radii[i] = std::max(radii[i], distance(q, pr.point, m));
          delegates[pi].push_back(q);
        }
        produced += pr.multiplicity;
      }
    }
    round3[i] = {3, i, part.size(), produced, elapsed_ms(start)};
  });
  for (auto& row : round3) r.trace.rows.push_back(row);

  Solution& sol = r.solution;
  sol.kind = kind;
  sol.alpha = alpha_of(kind);
  sol.seed = cfg.seed;
  sol.kernel_range = kernel_range;
  sol.gendiv_value = gendiv(kind, solved, m);
  for (const auto& ds : delegates) {
    for (const Point& p : ds) sol.points.push_back(p);
  }
  for (double x : radii) sol.instantiation_radius = std::max(sol.instantiation_radius, x);
  if (sol.instantiation_radius > kernel_range) {
    raise(ErrorCode::internal, "instantiation radius exceeded the shipped kernel range");
  }
  sol.value = evaluate(kind, sol.points, m);
  return r;
}

}  // namespace divmax
