#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "divmax/kcenter.hpp"
#include "divmax/metric.hpp"
#include "divmax/seqsolve.hpp"

namespace divmax {

/// Parameters of the one-pass core-set constructions. In strict mode kprime
/// is derived from the theorem constants ((32/eps')^D * k for the kernel-only
/// variant, (64/eps')^D * k for the delegate/count variants, with
/// eps' = eps/(1+eps)); otherwise the configured kprime is used, defaulting
/// to 8k, which is ample in practice.
struct StreamParams {
  std::size_t k = 1;
  std::size_t kprime = 0;  // 0 -> default 8k (ignored in strict mode)
  double epsilon = 1.0;
  int ddim = 3;
  bool strict = false;
};

/// kprime actually used by a run; base_constant is 32 or 64.
std::size_t effective_stream_kprime(const StreamParams& p, double base_constant);

/// Snapshot taken each time a phase begins (threshold assigned). The stated
/// invariants at this moment: every consumed point is within 2*threshold of
/// the kernel, and kernel points are pairwise >= threshold apart.
struct PhaseBoundary {
  int phase = 0;
  double threshold = 0.0;
  std::vector<Point> kernel;
  std::size_t points_consumed = 0;
};
using PhaseObserver = std::function<void(const PhaseBoundary&)>;

/// Phase-threshold streaming kernel: keeps at most kprime+1 points, doubling
/// the distance threshold whenever the buffer refills. Modes:
///   plain     - kernel points only
///   delegates - up to k delegate points per kernel point (kernel included)
///   counts    - like delegates, but only the number of delegates is kept
/// A sketch is a single-owner state machine: one thread feeds points via
/// offer(); distinct sketches may run concurrently.
class SmmSketch {
 public:
  enum class Mode { plain, delegates, counts };

  SmmSketch(const StreamParams& params, Mode mode, const MetricSpace& m,
            PhaseObserver observer = {});

  void offer(const Point& p);

  /// Kernel points plus final padding: at least k points whenever the stream
  /// had that many (shorter streams are returned whole). In delegates mode
  /// the result is the union of all delegate sets and contains the kernel.
  std::vector<Point> finish_points() const;

  /// Counts mode result: (kernel point, delegate count) pairs, padded from
  /// the merge buffer until the expanded size reaches k.
  GeneralizedCoreset finish_coreset() const;

  std::size_t consumed() const { return consumed_; }
  int phase() const { return phase_; }
  double threshold() const { return d_; }
  std::size_t kernel_size() const { return kernel_.size(); }
  std::size_t max_kernel_size_seen() const { return max_kernel_seen_; }
  std::vector<Point> kernel_points() const;
  Mode mode() const { return mode_; }

 private:
  struct Entry {
    Point point;
    std::vector<Point> delegates;  // delegates mode only; point itself first
    std::size_t count = 1;         // counts mode only; includes the point
  };

  void add_entry(const Point& p);
  void absorb(Entry& host, const Point& p);
  void do_merge();
  void notify_boundary();

  StreamParams params_;
  Mode mode_;
  MetricSpace metric_;
  PhaseObserver observer_;
  std::size_t kprime_eff_ = 0;

  std::vector<Entry> kernel_;
  std::vector<Point> merge_buffer_;  // points removed by the current phase's merge
  std::vector<Point> init_overflow_; // duplicate-coordinate points seen before phase 1
  double d_ = 0.0;
  int phase_ = 0;  // 0 while the initial buffer is still filling
  bool merge_pending_ = false;
  std::size_t consumed_ = 0;
  std::size_t max_kernel_seen_ = 0;
};

/// One-pass kernel construction (remote-edge / remote-cycle core-set).
std::vector<Point> smm_run(std::span<const Point> stream, const StreamParams& params,
                           const MetricSpace& m, PhaseObserver observer = {});

/// One-pass kernel + delegates (core-set for the other four measures).
std::vector<Point> smm_ext_run(std::span<const Point> stream, const StreamParams& params,
                               const MetricSpace& m, PhaseObserver observer = {});

/// One-pass generalized core-set: delegate counts instead of delegates.
GeneralizedCoreset smm_counts_run(std::span<const Point> stream, const StreamParams& params,
                                  const MetricSpace& m, PhaseObserver observer = {});

/// Two-pass streaming solution for the delegate-bearing measures: pass one
/// builds a count-based generalized core-set and solves it down to expanded
/// size k; pass two replaces every multiplicity by distinct nearby delegate
/// points from the stream.
struct TwoPassResult {
  Solution solution;
  GeneralizedCoreset coreset;    // pass-one output T
  GeneralizedCoreset solved;     // coherent subset with m = k
  double selection_radius = 0.0; // radius within which delegates were accepted
  double kernel_range = 0.0;     // max distance of a stream point to the coreset points
};

TwoPassResult smm_gen_two_pass(std::span<const Point> pass1, std::span<const Point> pass2,
                               DiversityKind kind, const StreamParams& params,
                               const MetricSpace& m);

}  // namespace divmax
