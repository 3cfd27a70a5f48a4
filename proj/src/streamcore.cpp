#include "divmax/streamcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "divmax/error.hpp"

namespace divmax {

std::size_t effective_stream_kprime(const StreamParams& p, double base_constant) {
  if (p.k < 1) raise(ErrorCode::argument, "stream params need k >= 1");
  if (p.epsilon <= 0.0 || p.epsilon > 1.0) {
    raise(ErrorCode::argument, "stream params need 0 < epsilon <= 1");
  }
  if (p.ddim < 1) raise(ErrorCode::argument, "stream params need ddim >= 1");
  if (p.strict) {
    const double eps_prime = p.epsilon / (1.0 + p.epsilon);
    double v = std::pow(base_constant / eps_prime, static_cast<double>(p.ddim)) *
               static_cast<double>(p.k);
    v = std::min(v, 1e12);  // short streams are returned whole anyway
    return static_cast<std::size_t>(std::ceil(v));
  }
  const std::size_t kp = p.kprime == 0 ? 8 * p.k : p.kprime;
  if (kp < p.k) raise(ErrorCode::argument, "stream params need kprime >= k");
  return kp;
}

SmmSketch::SmmSketch(const StreamParams& params, Mode mode, const MetricSpace& m,
                     PhaseObserver observer)
    : params_(params), mode_(mode), metric_(m), observer_(std::move(observer)) {
  kprime_eff_ = effective_stream_kprime(params, mode == Mode::plain ? 32.0 : 64.0);
}

void SmmSketch::offer(const Point& p) {
  ++consumed_;
  // A merge may leave the buffer full (no two points within 2d); the
  // threshold then doubles and the merge repeats until the buffer shrinks,
  // which the doubling guarantees once 2d reaches the buffer diameter.
  while (merge_pending_) {
    do_merge();
    merge_pending_ = false;
    if (kernel_.size() >= kprime_eff_ + 1) {
      d_ *= 2.0;
      ++phase_;
      notify_boundary();
      merge_pending_ = true;
    }
  }
  // Nearest kernel entry; the earliest wins ties.
  std::size_t ni = kernel_.size();
  double nd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kernel_.size(); ++i) {
    const double d = distance(p, kernel_[i].point, metric_);
    if (d < nd) {
      nd = d;
      ni = i;
    }
  }
  // During initialization (phase 0) the threshold is zero, so any point with
  // positive distance to the buffer is admitted and exact duplicates are
  // absorbed, which keeps the first phase threshold strictly positive.
  if (kernel_.empty() || nd > 4.0 * d_) {
    add_entry(p);
  } else if (phase_ == 0 && mode_ == Mode::plain) {
    if (init_overflow_.size() < params_.k) init_overflow_.push_back(p);
  } else {
    absorb(kernel_[ni], p);
  }
}

void SmmSketch::add_entry(const Point& p) {
  Entry e;
  e.point = p;
  if (mode_ == Mode::delegates) e.delegates.push_back(p);
  e.count = 1;
  kernel_.push_back(std::move(e));
  max_kernel_seen_ = std::max(max_kernel_seen_, kernel_.size());
  if (kernel_.size() < kprime_eff_ + 1) return;
  if (phase_ == 0) {
    d_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kernel_.size(); ++i) {
      for (std::size_t j = i + 1; j < kernel_.size(); ++j) {
        d_ = std::min(d_, distance(kernel_[i].point, kernel_[j].point, metric_));
      }
    }
    phase_ = 1;
    init_overflow_.clear();  // only the whole-stream fallback needs these
  } else {
    d_ *= 2.0;
    ++phase_;
  }
  notify_boundary();
  merge_pending_ = true;
}

void SmmSketch::absorb(Entry& host, const Point& p) {
  switch (mode_) {
    case Mode::plain:
      break;
    case Mode::delegates:
      if (host.delegates.size() < params_.k) host.delegates.push_back(p);
      break;
    case Mode::counts:
      if (host.count < params_.k) ++host.count;
      break;
  }
}

void SmmSketch::do_merge() {
  // Greedy maximal independent set of the conflict graph (edges at distance
  // <= 2d) in insertion order; removed points feed the merge buffer and, in
  // the delegating modes, hand over as many delegates as the host can hold.
  merge_buffer_.clear();
  std::vector<Entry> kept;
  kept.reserve(kernel_.size());
  for (Entry& e : kernel_) {
    std::size_t host = kept.size();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (distance(e.point, kept[i].point, metric_) <= 2.0 * d_) {
        host = i;
        break;
      }
    }
    if (host == kept.size()) {
      kept.push_back(std::move(e));
      continue;
    }
    Entry& h = kept[host];
    if (mode_ == Mode::delegates) {
      const std::size_t room = params_.k > h.delegates.size() ? params_.k - h.delegates.size() : 0;
      const std::size_t take = std::min(e.delegates.size(), room);
      for (std::size_t i = 0; i < take; ++i) h.delegates.push_back(std::move(e.delegates[i]));
    } else if (mode_ == Mode::counts) {
      const std::size_t room = params_.k > h.count ? params_.k - h.count : 0;
      h.count += std::min(e.count, room);
    }
    merge_buffer_.push_back(std::move(e.point));
  }
  kernel_ = std::move(kept);
}

void SmmSketch::notify_boundary() {
  if (!observer_) return;
  PhaseBoundary b;
  b.phase = phase_;
  b.threshold = d_;
  b.kernel = kernel_points();
  b.points_consumed = consumed_;
  observer_(b);
}

std::vector<Point> SmmSketch::kernel_points() const {
  std::vector<Point> out;
  out.reserve(kernel_.size());
  for (const Entry& e : kernel_) out.push_back(e.point);
  return out;
}

std::vector<Point> SmmSketch::finish_points() const {
  if (consumed_ == 0) raise(ErrorCode::argument, "streaming over an empty stream");
  std::vector<Point> out;
  if (mode_ == Mode::delegates) {
    for (const Entry& e : kernel_) {
      for (const Point& p : e.delegates) out.push_back(p);
    }
  } else {
    out = kernel_points();
    out.insert(out.end(), init_overflow_.begin(), init_overflow_.end());
  }
  // Final padding from the merge buffer, in insertion order.
  for (const Point& p : merge_buffer_) {
    if (out.size() >= params_.k) break;
    out.push_back(p);
  }
  return out;
}

GeneralizedCoreset SmmSketch::finish_coreset() const {
  if (consumed_ == 0) raise(ErrorCode::argument, "streaming over an empty stream");
  if (mode_ != Mode::counts) raise(ErrorCode::internal, "finish_coreset needs counts mode");
  GeneralizedCoreset g;
  g.pairs.reserve(kernel_.size());
  for (const Entry& e : kernel_) g.pairs.push_back({e.point, e.count});
  std::size_t m = g.expanded_size();
  for (const Point& p : merge_buffer_) {
    if (m >= params_.k) break;
    g.pairs.push_back({p, 1});
    ++m;
  }
  return g;
}

std::vector<Point> smm_run(std::span<const Point> stream, const StreamParams& params,
                           const MetricSpace& m, PhaseObserver observer) {
  SmmSketch sk(params, SmmSketch::Mode::plain, m, std::move(observer));
  for (const Point& p : stream) sk.offer(p);
  return sk.finish_points();
}

std::vector<Point> smm_ext_run(std::span<const Point> stream, const StreamParams& params,
                               const MetricSpace& m, PhaseObserver observer) {
  SmmSketch sk(params, SmmSketch::Mode::delegates, m, std::move(observer));
  for (const Point& p : stream) sk.offer(p);
  return sk.finish_points();
}

GeneralizedCoreset smm_counts_run(std::span<const Point> stream, const StreamParams& params,
                                  const MetricSpace& m, PhaseObserver observer) {
  SmmSketch sk(params, SmmSketch::Mode::counts, m, std::move(observer));
  for (const Point& p : stream) sk.offer(p);
  return sk.finish_coreset();
}

namespace {

// Delegate bookkeeping for one pair of the solved core-set during pass two.
struct PairSlot {
  Point point;
  std::size_t need = 1;  // multiplicity, including the point itself
  bool self_seen = false;
  std::vector<Point> assigned;  // at most need-1 (the point has a reserved slot)
  std::vector<Point> backups;   // feasible points retained for end-of-stream repair
};

// Maximum bipartite matching (Kuhn) between retained candidate points and
// the remaining delegate slots; used only if the greedy first-unmet-pair
// assignment left some pair short.
bool augment(std::size_t cand, const std::vector<std::vector<std::size_t>>& adj,
             std::vector<std::size_t>& slot_owner, std::vector<bool>& visited) {
  for (std::size_t unit : adj[cand]) {
    if (visited[unit]) continue;
    visited[unit] = true;
    if (slot_owner[unit] == static_cast<std::size_t>(-1) ||
        augment(slot_owner[unit], adj, slot_owner, visited)) {
      slot_owner[unit] = cand;
      return true;
    }
  }
  return false;
}

void repair_assignment(std::vector<PairSlot>& slots, const MetricSpace& m,
                       double selection_radius) {
  bool short_somewhere = false;
  for (const PairSlot& s : slots) {
    if (s.assigned.size() + 1 < s.need) short_somewhere = true;
  }
  if (!short_somewhere) return;

  // Pool every retained candidate (deduplicated by id) and re-match.
  std::vector<Point> pool;
  std::unordered_map<std::int64_t, std::size_t> seen;
  const auto add_cand = [&](const Point& p) {
    if (seen.emplace(p.id, pool.size()).second) pool.push_back(p);
  };
  for (const PairSlot& s : slots) {
    for (const Point& p : s.assigned) add_cand(p);
    for (const Point& p : s.backups) add_cand(p);
  }
  std::vector<std::size_t> unit_slot;  // capacity-expanded slot units
  for (std::size_t j = 0; j < slots.size(); ++j) {
    for (std::size_t u = 1; u < slots[j].need; ++u) unit_slot.push_back(j);
  }
  std::vector<std::vector<std::size_t>> adj(pool.size());
  for (std::size_t c = 0; c < pool.size(); ++c) {
    for (std::size_t u = 0; u < unit_slot.size(); ++u) {
      if (distance(pool[c], slots[unit_slot[u]].point, m) <= selection_radius) {
        adj[c].push_back(u);
      }
    }
  }
  std::vector<std::size_t> owner(unit_slot.size(), static_cast<std::size_t>(-1));
  std::size_t matched = 0;
  for (std::size_t c = 0; c < pool.size(); ++c) {
    std::vector<bool> visited(unit_slot.size(), false);
    if (augment(c, adj, owner, visited)) ++matched;
    if (matched == unit_slot.size()) break;
  }
  if (matched < unit_slot.size()) {
    raise(ErrorCode::internal,
          "two-pass instantiation infeasible: could not fill every delegate slot");
  }
  for (PairSlot& s : slots) s.assigned.clear();
  for (std::size_t u = 0; u < unit_slot.size(); ++u) {
    slots[unit_slot[u]].assigned.push_back(pool[owner[u]]);
  }
}

}  // namespace

TwoPassResult smm_gen_two_pass(std::span<const Point> pass1, std::span<const Point> pass2,
                               DiversityKind kind, const StreamParams& params,
                               const MetricSpace& m) {
  if (!uses_delegates(kind)) {
    raise(ErrorCode::argument,
          std::string("two-pass streaming does not support ") + kind_name(kind));
  }
  if (pass1.size() != pass2.size()) {
    raise(ErrorCode::consistency, "the two passes enumerate streams of different lengths");
  }
  if (pass1.empty()) raise(ErrorCode::argument, "streaming over an empty stream");
  if (pass1.size() < params.k) {
    raise(ErrorCode::argument, "stream shorter than k");
  }

  TwoPassResult r;
  SmmSketch sketch(params, SmmSketch::Mode::counts, m);
  for (const Point& p : pass1) sketch.offer(p);
  r.coreset = sketch.finish_coreset();
  r.solved = solve_generalized(kind, r.coreset, params.k, m);
  // Every point a count ever stood for stays within 4x the final threshold of
  // its (possibly migrated) kernel point; the tiny slack absorbs rounding in
  // the recomputed distances.
  r.selection_radius = 4.0 * sketch.threshold() * (1.0 + 1e-12);

  std::vector<PairSlot> slots;
  slots.reserve(r.solved.size());
  std::unordered_map<std::int64_t, std::size_t> slot_by_id;
  for (const auto& pr : r.solved.pairs) {
    slot_by_id.emplace(pr.point.id, slots.size());
    slots.push_back({pr.point, pr.multiplicity, false, {}, {}});
  }
  const std::vector<Point> coreset_points = [&] {
    std::vector<Point> v;
    v.reserve(r.coreset.size());
    for (const auto& pr : r.coreset.pairs) v.push_back(pr.point);
    return v;
  }();

  r.kernel_range = 0.0;
  for (const Point& q : pass2) {
    r.kernel_range = std::max(r.kernel_range, set_distance(q, coreset_points, m));
    const auto self = slot_by_id.find(q.id);
    if (self != slot_by_id.end()) {
      slots[self->second].self_seen = true;
      continue;
    }
    // Greedy: the first pair (in kernel order) whose delegate count is unmet
    // takes the point; points useful only to met pairs are retained as
    // backups in case the greedy order starves a later pair.
    bool placed = false;
    for (PairSlot& s : slots) {
      if (s.assigned.size() + 1 >= s.need) continue;
      if (distance(q, s.point, m) <= r.selection_radius) {
        s.assigned.push_back(q);
        placed = true;
        break;
      }
    }
    if (!placed) {
      for (PairSlot& s : slots) {
        if (s.backups.size() >= s.need) continue;
        if (distance(q, s.point, m) <= r.selection_radius) s.backups.push_back(q);
      }
    }
  }
  for (const PairSlot& s : slots) {
    if (!s.self_seen) {
      raise(ErrorCode::consistency,
            "pass two never produced point " + std::to_string(s.point.id) +
                " of the core-set; the passes disagree");
    }
  }
  repair_assignment(slots, m, r.selection_radius);

  Solution& sol = r.solution;
  sol.kind = kind;
  sol.alpha = alpha_of(kind);
  sol.gendiv_value = gendiv(kind, r.solved, m);
  sol.kernel_range = r.kernel_range;
  sol.instantiation_radius = 0.0;
  for (const PairSlot& s : slots) {
    sol.points.push_back(s.point);
    for (const Point& p : s.assigned) {
      sol.points.push_back(p);
      sol.instantiation_radius =
          std::max(sol.instantiation_radius, distance(p, s.point, m));
    }
  }
  sol.value = evaluate(kind, sol.points, m);
  return r;
}

}  // namespace divmax
