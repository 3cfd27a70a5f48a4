// Experiment harness for the divmax library. Talks to the shared library
// exclusively through the C interface in divmax.h.
//
// Exit codes: 0 success, 1 I/O or data failure, 2 usage / incompatible flags.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "divmax.h"

namespace {

int exit_code_for(dm_status s) {
  switch (s) {
    case DM_OK: return 0;
    case DM_ERR_IO:
    case DM_ERR_PARSE:
    case DM_ERR_SHAPE: return 1;
    default: return 2;
  }
}

[[noreturn]] void fail(dm_status s) {
  std::cerr << "error: " << dm_last_error() << "\n";
  std::exit(exit_code_for(s));
}

struct DatasetGuard {
  dm_dataset* ds = nullptr;
  ~DatasetGuard() { dm_dataset_free(ds); }
};

dm_dataset* open_dataset(const std::string& path, bool sparse, int min_entries) {
  dm_dataset* ds = nullptr;
  const dm_status s =
      sparse ? dm_load_sparse(path.c_str(), min_entries, &ds) : dm_load_dense(path.c_str(), &ds);
  if (s != DM_OK) fail(s);
  return ds;
}

void print_header() {
  char buf[256];
  dm_record_csv_header(buf, sizeof(buf));
  std::cout << buf << "\n";
}

void print_record(const dm_record& r) {
  char buf[512];
  const dm_status s = dm_record_to_csv(&r, buf, sizeof(buf));
  if (s != DM_OK) fail(s);
  std::cout << buf << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divmax: core-set based diversity maximization"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "write a synthetic sphere dataset");
  std::int64_t gen_n = 1000, gen_planted = 8;
  int gen_dim = 3;
  std::uint64_t gen_seed = 0;
  double gen_inner = 0.8;
  std::string gen_out;
  gen->add_option("--n", gen_n, "total points");
  gen->add_option("--k-planted", gen_planted, "points on the unit sphere surface");
  gen->add_option("--dim", gen_dim, "dimension");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--inner-radius", gen_inner, "radius of the inner ball");
  gen->add_option("--out", gen_out, "output file")->required();

  // shared run/baseline/throughput flags ------------------------------------
  std::string dataset_path, alg = "seq", kind = "remote-edge", metric = "euclidean";
  std::string partitioning = "contiguous";
  bool sparse = false;
  int min_entries = 10;
  std::int64_t k = 2, kprime = 0, ell = 1, budget = 0;
  double epsilon = 1.0, gamma = 1.0 / 3.0, cap_c = 4.0;
  int ddim = 3, repeat = 1, threads = 1;
  std::uint64_t seed = 0;
  bool strict = false, no_timing = false;
  std::string baseline_file;

  auto* run = app.add_subcommand("run", "run an algorithm and emit CSV records");
  run->add_option("--dataset", dataset_path, "dense (or --sparse) vector file")->required();
  run->add_flag("--sparse", sparse, "dataset uses the sparse index:count format");
  run->add_option("--min-entries", min_entries, "sparse filter threshold");
  run->add_option("--alg", alg,
                  "seq|stream|stream2pass|mr2|mr2rand|mrmulti|mr3gen|oracle");
  run->add_option("--kind", kind, "diversity measure (remote-edge, ...)");
  run->add_option("--metric", metric, "euclidean|cosine");
  run->add_option("--k", k, "solution size");
  run->add_option("--kprime", kprime, "core-set parameter (0 = 8k)");
  run->add_option("--ell", ell, "partitions");
  run->add_option("--partitioning", partitioning, "contiguous|random|adversarial");
  run->add_option("--epsilon", epsilon, "accuracy parameter");
  run->add_option("--ddim", ddim, "assumed doubling dimension");
  run->add_option("--gamma", gamma, "multi-round recursion parameter");
  run->add_option("--budget", budget, "multi-round memory budget M_L");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--repeat", repeat, "emit one row per seed seed..seed+R-1");
  run->add_flag("--strict", strict, "derive kprime from the theorem constants");
  run->add_option("--threads", threads, "round-1 task parallelism");
  run->add_option("--cap-c", cap_c, "randomized delegate-cap constant");
  run->add_option("--baseline", baseline_file, "ratio denominator file (from `baseline`)");
  run->add_flag("--no-timing", no_timing, "zero the timing columns (byte-stable output)");

  auto* base = app.add_subcommand("baseline", "compute and store a reference value");
  std::string base_out;
  int base_repeats = 10;
  base->add_option("--dataset", dataset_path, "dense (or --sparse) vector file")->required();
  base->add_flag("--sparse", sparse, "dataset uses the sparse index:count format");
  base->add_option("--min-entries", min_entries, "sparse filter threshold");
  base->add_option("--kind", kind, "diversity measure");
  base->add_option("--metric", metric, "euclidean|cosine");
  base->add_option("--k", k, "solution size");
  base->add_option("--kprime", kprime, "core-set parameter (0 = 8k, clamp to partition)");
  base->add_option("--ell", ell, "partitions");
  base->add_option("--seed", seed, "base seed");
  base->add_option("--repeats", base_repeats, "number of seeded runs (max is kept)");
  base->add_option("--threads", threads, "round-1 task parallelism");
  base->add_option("--out", base_out, "value file to write")->required();

  auto* thr = app.add_subcommand("throughput", "streaming-kernel rate over a (k,kprime) grid");
  std::vector<std::int64_t> thr_ks, thr_kprimes;
  std::string thr_variant = "smm";
  thr->add_option("--dataset", dataset_path, "dense (or --sparse) vector file")->required();
  thr->add_flag("--sparse", sparse, "dataset uses the sparse index:count format");
  thr->add_option("--min-entries", min_entries, "sparse filter threshold");
  thr->add_option("--metric", metric, "euclidean|cosine");
  thr->add_option("--variant", thr_variant, "smm|smmext");
  thr->add_option("--k", thr_ks, "grid of k values")->required();
  thr->add_option("--kprime", thr_kprimes, "grid of kprime values")->required();
  thr->add_flag("--no-timing", no_timing, "zero the timing columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    dm_dataset* ds = nullptr;
    dm_status s = dm_generate_sphere(gen_n, gen_planted, gen_dim, gen_seed, gen_inner, &ds);
    if (s != DM_OK) fail(s);
    DatasetGuard guard{ds};
    s = dm_save_dense(ds, gen_out.c_str());
    if (s != DM_OK) fail(s);
    return 0;
  }

  if (run->parsed()) {
    DatasetGuard guard{open_dataset(dataset_path, sparse, min_entries)};
    dm_run_params p;
    dm_run_params_init(&p);
    p.algorithm = alg.c_str();
    p.kind = kind.c_str();
    p.metric = metric.c_str();
    p.partitioning = partitioning.c_str();
    p.k = k;
    p.kprime = kprime;
    p.ell = ell;
    p.epsilon = epsilon;
    p.ddim = ddim;
    p.gamma = gamma;
    p.memory_budget = budget;
    p.strict = strict ? 1 : 0;
    p.threads = threads;
    p.cap_c = cap_c;
    p.timing = no_timing ? 0 : 1;
    if (!baseline_file.empty()) {
      std::ifstream f(baseline_file);
      double b = 0.0;
      if (!(f >> b)) {
        std::cerr << "error: cannot read baseline value from " << baseline_file << "\n";
        return 1;
      }
      p.has_baseline = 1;
      p.baseline = b;
    }
    print_header();
    for (int r = 0; r < repeat; ++r) {
      p.seed = seed + static_cast<std::uint64_t>(r);
      dm_record rec;
      const dm_status s = dm_run(guard.ds, &p, &rec);
      if (s != DM_OK) fail(s);
      print_record(rec);
    }
    return 0;
  }

  if (base->parsed()) {
    DatasetGuard guard{open_dataset(dataset_path, sparse, min_entries)};
    if (kprime == 0) {
      const std::int64_t part = dm_dataset_size(guard.ds) / (ell > 0 ? ell : 1);
      kprime = std::min<std::int64_t>(part, 8 * k);
    }
    double value = 0.0;
    const dm_status s = dm_baseline(guard.ds, kind.c_str(), metric.c_str(), k, kprime, ell,
                                    seed, base_repeats, threads, &value);
    if (s != DM_OK) fail(s);
    std::ofstream f(base_out);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    f << buf << "\n";
    if (!f.good()) {
      std::cerr << "error: cannot write " << base_out << "\n";
      return 1;
    }
    return 0;
  }

  if (thr->parsed()) {
    DatasetGuard guard{open_dataset(dataset_path, sparse, min_entries)};
    print_header();
    std::vector<std::pair<std::int64_t, double>> cells;  // (k*kprime, rate)
    for (const std::int64_t tk : thr_ks) {
      for (const std::int64_t tkp : thr_kprimes) {
        dm_record rec;
        const dm_status s = dm_throughput(guard.ds, metric.c_str(), thr_variant.c_str(), tk,
                                          tkp, no_timing ? 0 : 1, &rec);
        if (s != DM_OK) fail(s);
        print_record(rec);
        cells.emplace_back(tk * tkp, rec.throughput_pts_per_sec);
      }
    }
    // Monotonicity report: rate should not grow with the k*kprime product.
    std::sort(cells.begin(), cells.end());
    bool monotone = true;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].second > cells[i - 1].second) monotone = false;
    }
    if (!no_timing && cells.size() > 1) {
      std::cerr << "# throughput non-increasing in k*kprime: " << (monotone ? "yes" : "no")
                << "\n";
    }
    return 0;
  }

  return 2;
}
