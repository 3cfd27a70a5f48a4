#include "divmax/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "divmax/error.hpp"
#include "divmax/oracle.hpp"
#include "divmax/rng.hpp"
#include "divmax/streamcore.hpp"

namespace divmax {

MetricSpace metric_from_name(const std::string& name) {
  if (name == "euclidean") return euclidean_space();
  if (name == "cosine") return cosine_space();
  raise(ErrorCode::argument, "unknown metric: " + name);
}

std::string experiment_csv_header() {
  return "algorithm,kind,n,k,kprime,ell,partitioning,seed,value,baseline_value,ratio,millis,"
         "throughput_pts_per_sec";
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string experiment_to_csv(const ExperimentRecord& r) {
  std::string out;
  out += r.algorithm;
  out += ',';
  out += r.kind;
  out += ',';
  out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + std::to_string(r.kprime) +
         ',' + std::to_string(r.ell) + ',';
  out += r.partitioning;
  out += ',';
  out += std::to_string(r.seed) + ',';
  out += fmt_double(r.value) + ',';
  out += (r.baseline_value ? fmt_double(*r.baseline_value) : std::string()) + ',';
  out += (r.ratio ? fmt_double(*r.ratio) : std::string()) + ',';
  out += fmt_fixed(r.millis) + ',';
  out += fmt_fixed(r.throughput_pts_per_sec);
  return out;
}

ExperimentRecord experiment_from_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (fields.size() != 13) {
    raise(ErrorCode::parse, "experiment row has " + std::to_string(fields.size()) +
                                " fields, expected 13");
  }
  ExperimentRecord r;
  try {
    r.algorithm = fields[0];
    r.kind = fields[1];
    r.n = std::stoll(fields[2]);
    r.k = std::stoll(fields[3]);
    r.kprime = std::stoll(fields[4]);
    r.ell = std::stoll(fields[5]);
    r.partitioning = fields[6];
    r.seed = std::stoull(fields[7]);
    r.value = std::stod(fields[8]);
    if (!fields[9].empty()) r.baseline_value = std::stod(fields[9]);
    if (!fields[10].empty()) r.ratio = std::stod(fields[10]);
    r.millis = std::stod(fields[11]);
    r.throughput_pts_per_sec = std::stod(fields[12]);
  } catch (const std::exception&) {
    raise(ErrorCode::parse, "malformed experiment row: " + line);
  }
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<Point> shuffled(std::span<const Point> dataset, std::uint64_t seed) {
  std::vector<Point> v(dataset.begin(), dataset.end());
  Rng rng(seed);
  rng.shuffle(v);
  return v;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(std::span<const Point> dataset,
                                             const RunParams& params) {
  if (params.repeat < 1) raise(ErrorCode::argument, "repeat must be at least 1");
  const MetricSpace metric = metric_from_name(params.metric);
  const DiversityKind kind = kind_from_name(params.kind);
  const bool needs_delegate_kind = params.algorithm == "stream2pass" ||
                                   params.algorithm == "mr2rand" ||
                                   params.algorithm == "mr3gen";
  if (needs_delegate_kind && !uses_delegates(kind)) {
    raise(ErrorCode::unsupported, params.algorithm + " supports only remote-clique, "
                                  "remote-star, remote-bipartition and remote-tree");
  }

  std::vector<ExperimentRecord> records;
  records.reserve(static_cast<std::size_t>(params.repeat));
  for (int rep = 0; rep < params.repeat; ++rep) {
    const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(rep);
    ExperimentRecord rec;
    rec.algorithm = params.algorithm;
    rec.kind = params.kind;
    rec.n = static_cast<std::int64_t>(dataset.size());
    rec.k = static_cast<std::int64_t>(params.k);
    rec.ell = static_cast<std::int64_t>(params.ell);
    rec.partitioning = params.partitioning;
    rec.seed = seed;

    PipelineConfig cfg;
    cfg.ell = params.ell;
    cfg.partitioning = partitioning_from_name(params.partitioning);
    cfg.k = params.k;
    cfg.kprime = params.kprime;
    cfg.epsilon = params.epsilon;
    cfg.ddim = params.ddim;
    cfg.gamma = params.gamma;
    cfg.strict = params.strict;
    cfg.memory_budget = params.memory_budget;
    cfg.seed = seed;
    cfg.threads = params.threads;
    cfg.rand_cap_c = params.cap_c;

    StreamParams sp;
    sp.k = params.k;
    sp.kprime = params.kprime;
    sp.epsilon = params.epsilon;
    sp.ddim = params.ddim;
    sp.strict = params.strict;

    const auto start = Clock::now();
    if (params.algorithm == "seq") {
      rec.value = solve_sequential(kind, dataset, params.k, metric).value.value;
      rec.kprime = static_cast<std::int64_t>(params.k);
      rec.ell = 1;
    } else if (params.algorithm == "oracle") {
      rec.value = brute_force(kind, dataset, params.k, metric).value;
      rec.kprime = rec.k;
      rec.ell = 1;
    } else if (params.algorithm == "stream") {
      const std::vector<Point> order = shuffled(dataset, seed);
      const std::vector<Point> core = uses_delegates(kind)
                                          ? smm_ext_run(order, sp, metric)
                                          : smm_run(order, sp, metric);
      rec.value = solve_sequential(kind, core, params.k, metric).value.value;
      rec.kprime = static_cast<std::int64_t>(
          effective_stream_kprime(sp, uses_delegates(kind) ? 64.0 : 32.0));
      rec.ell = 1;
    } else if (params.algorithm == "stream2pass") {
      const std::vector<Point> order = shuffled(dataset, seed);
      rec.value = smm_gen_two_pass(order, order, kind, sp, metric).solution.value.value;
      rec.kprime = static_cast<std::int64_t>(effective_stream_kprime(sp, 64.0));
      rec.ell = 1;
    } else if (params.algorithm == "mr2" || params.algorithm == "mr2rand" ||
               params.algorithm == "mrmulti" || params.algorithm == "mr3gen") {
      MrResult res;
      if (params.algorithm == "mr2") {
        res = mr_two_round(dataset, kind, cfg, metric);
      } else if (params.algorithm == "mr2rand") {
        res = mr_randomized(dataset, kind, cfg, metric);
        rec.partitioning = "random";
      } else if (params.algorithm == "mrmulti") {
        res = mr_multi_round(dataset, kind, cfg, metric);
      } else {
        res = mr_three_round_gen(dataset, kind, cfg, metric);
      }
      rec.value = res.solution.value.value;
      rec.kprime = static_cast<std::int64_t>(params.kprime == 0 ? 8 * params.k : params.kprime);
    } else {
      raise(ErrorCode::unsupported, "unknown algorithm: " + params.algorithm);
    }
    const double ms = elapsed_ms(start);
    if (params.timing) {
      rec.millis = ms;
      rec.throughput_pts_per_sec =
          static_cast<double>(dataset.size()) / std::max(ms / 1000.0, 1e-9);
    }
    if (params.baseline) {
      rec.baseline_value = *params.baseline;
      rec.ratio = *params.baseline / rec.value;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

double compute_baseline(std::span<const Point> dataset, DiversityKind kind,
                        const MetricSpace& metric, std::size_t k, std::size_t kprime,
                        std::size_t ell, std::uint64_t seed, int repeats, int threads) {
  if (repeats < 1) raise(ErrorCode::argument, "baseline needs at least one run");
  double best = 0.0;
  for (int i = 0; i < repeats; ++i) {
    PipelineConfig cfg;
    cfg.ell = ell;
    cfg.partitioning = Partitioning::random;
    cfg.k = k;
    cfg.kprime = kprime;
    cfg.seed = seed + static_cast<std::uint64_t>(i);
    cfg.threads = threads;
    const MrResult r = mr_two_round(dataset, kind, cfg, metric);
    best = std::max(best, r.solution.value.value);
  }
  return best;
}

ExperimentRecord measure_throughput(std::span<const Point> dataset, const MetricSpace& metric,
                                    const std::string& variant, std::size_t k,
                                    std::size_t kprime, bool timing) {
  if (dataset.empty()) raise(ErrorCode::argument, "throughput needs a nonempty dataset");
  SmmSketch::Mode mode;
  if (variant == "smm") {
    mode = SmmSketch::Mode::plain;
  } else if (variant == "smmext") {
    mode = SmmSketch::Mode::delegates;
  } else {
    raise(ErrorCode::argument, "throughput variant must be smm or smmext");
  }
  StreamParams sp;
  sp.k = k;
  sp.kprime = kprime;
  SmmSketch sketch(sp, mode, metric);
  const auto start = Clock::now();
  for (const Point& p : dataset) sketch.offer(p);
  const double ms = elapsed_ms(start);
  const std::vector<Point> out = sketch.finish_points();

  ExperimentRecord rec;
  rec.algorithm = "throughput";
  rec.kind = variant == "smm" ? "remote-edge" : "remote-clique";
  rec.n = static_cast<std::int64_t>(dataset.size());
  rec.k = static_cast<std::int64_t>(k);
  rec.kprime = static_cast<std::int64_t>(effective_stream_kprime(sp, variant == "smm" ? 32.0 : 64.0));
  rec.ell = 1;
  rec.partitioning = "-";
  rec.value = static_cast<double>(out.size());
  if (timing) {
    rec.millis = ms;
    rec.throughput_pts_per_sec =
        static_cast<double>(dataset.size()) / std::max(ms / 1000.0, 1e-9);
  }
  return rec;
}

}  // namespace divmax
