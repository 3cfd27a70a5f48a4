#include "divmax.h"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "divmax/data.hpp"
#include "divmax/error.hpp"
#include "divmax/experiment.hpp"

namespace {

thread_local std::string g_last_error;

dm_status map_code(divmax::ErrorCode c) {
  using divmax::ErrorCode;
  switch (c) {
    case ErrorCode::argument: return DM_ERR_ARGUMENT;
    case ErrorCode::domain: return DM_ERR_DOMAIN;
    case ErrorCode::shape: return DM_ERR_SHAPE;
    case ErrorCode::parse: return DM_ERR_PARSE;
    case ErrorCode::config: return DM_ERR_CONFIG;
    case ErrorCode::consistency: return DM_ERR_CONSISTENCY;
    case ErrorCode::io: return DM_ERR_IO;
    case ErrorCode::unsupported: return DM_ERR_UNSUPPORTED;
    case ErrorCode::internal: return DM_ERR_INTERNAL;
  }
  return DM_ERR_INTERNAL;
}

template <class F>
dm_status wrap(F&& f) noexcept {
  try {
    f();
    return DM_OK;
  } catch (const divmax::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return DM_ERR_INTERNAL;
  }
}

void copy_str(char* dst, size_t dstsz, const std::string& src) {
  std::snprintf(dst, dstsz, "%s", src.c_str());
}

dm_record to_c(const divmax::ExperimentRecord& rec) {
  dm_record r;
  std::memset(&r, 0, sizeof(r));
  copy_str(r.algorithm, sizeof(r.algorithm), rec.algorithm);
  copy_str(r.kind, sizeof(r.kind), rec.kind);
  r.n = rec.n;
  r.k = rec.k;
  r.kprime = rec.kprime;
  r.ell = rec.ell;
  copy_str(r.partitioning, sizeof(r.partitioning), rec.partitioning);
  r.seed = rec.seed;
  r.value = rec.value;
  r.has_baseline = rec.baseline_value.has_value() ? 1 : 0;
  r.baseline_value = rec.baseline_value.value_or(0.0);
  r.ratio = rec.ratio.value_or(0.0);
  r.millis = rec.millis;
  r.throughput_pts_per_sec = rec.throughput_pts_per_sec;
  return r;
}

divmax::ExperimentRecord from_c(const dm_record& r) {
  divmax::ExperimentRecord rec;
  rec.algorithm = r.algorithm;
  rec.kind = r.kind;
  rec.n = r.n;
  rec.k = r.k;
  rec.kprime = r.kprime;
  rec.ell = r.ell;
  rec.partitioning = r.partitioning;
  rec.seed = r.seed;
  rec.value = r.value;
  if (r.has_baseline) {
    rec.baseline_value = r.baseline_value;
    rec.ratio = r.ratio;
  }
  rec.millis = r.millis;
  rec.throughput_pts_per_sec = r.throughput_pts_per_sec;
  return rec;
}

}  // namespace

struct dm_dataset {
  std::vector<divmax::Point> points;
};

extern "C" {

dm_status dm_generate_sphere(int64_t n, int64_t k_planted, int dim, uint64_t seed,
                             double inner_radius, dm_dataset** out) {
  return wrap([&] {
    if (out == nullptr) divmax::raise(divmax::ErrorCode::argument, "null output handle");
    if (n < 0 || k_planted < 0) {
      divmax::raise(divmax::ErrorCode::argument, "sizes must be nonnegative");
    }
    divmax::DatasetSpec spec;
    spec.n = static_cast<std::size_t>(n);
    spec.k_planted = static_cast<std::size_t>(k_planted);
    spec.dim = dim;
    spec.seed = seed;
    spec.inner_radius = inner_radius == 0.0 ? 0.8 : inner_radius;
    auto* ds = new dm_dataset{divmax::gen_sphere(spec)};
    *out = ds;
  });
}

dm_status dm_load_dense(const char* path, dm_dataset** out) {
  return wrap([&] {
    if (path == nullptr || out == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    *out = new dm_dataset{divmax::load_dense(path)};
  });
}

dm_status dm_load_sparse(const char* path, int min_entries, dm_dataset** out) {
  return wrap([&] {
    if (path == nullptr || out == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    *out = new dm_dataset{divmax::load_sparse(path, min_entries == 0 ? 10 : min_entries)};
  });
}

dm_status dm_save_dense(const dm_dataset* ds, const char* path) {
  return wrap([&] {
    if (ds == nullptr || path == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    divmax::save_dense(path, ds->points);
  });
}

int64_t dm_dataset_size(const dm_dataset* ds) {
  return ds == nullptr ? 0 : static_cast<int64_t>(ds->points.size());
}

void dm_dataset_free(dm_dataset* ds) { delete ds; }

void dm_run_params_init(dm_run_params* p) {
  std::memset(p, 0, sizeof(*p));
  p->algorithm = "seq";
  p->kind = "remote-edge";
  p->metric = "euclidean";
  p->partitioning = "contiguous";
  p->k = 2;
  p->ell = 1;
  p->epsilon = 1.0;
  p->ddim = 3;
  p->gamma = 1.0 / 3.0;
  p->threads = 1;
  p->cap_c = 4.0;
  p->timing = 1;
}

dm_status dm_run(const dm_dataset* ds, const dm_run_params* p, dm_record* out) {
  return wrap([&] {
    if (ds == nullptr || p == nullptr || out == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    divmax::RunParams rp;
    rp.algorithm = p->algorithm ? p->algorithm : "seq";
    rp.kind = p->kind ? p->kind : "remote-edge";
    rp.metric = p->metric ? p->metric : "euclidean";
    rp.partitioning = p->partitioning ? p->partitioning : "contiguous";
    rp.k = static_cast<std::size_t>(p->k);
    rp.kprime = static_cast<std::size_t>(p->kprime);
    rp.ell = static_cast<std::size_t>(p->ell);
    rp.epsilon = p->epsilon;
    rp.ddim = p->ddim;
    rp.gamma = p->gamma;
    rp.memory_budget = static_cast<std::size_t>(p->memory_budget);
    rp.seed = p->seed;
    rp.repeat = 1;
    rp.strict = p->strict != 0;
    rp.threads = p->threads;
    rp.cap_c = p->cap_c == 0.0 ? 4.0 : p->cap_c;
    if (p->has_baseline) rp.baseline = p->baseline;
    rp.timing = p->timing != 0;
    const auto records = divmax::run_experiment(ds->points, rp);
    *out = to_c(records.front());
  });
}

dm_status dm_baseline(const dm_dataset* ds, const char* kind, const char* metric, int64_t k,
                      int64_t kprime, int64_t ell, uint64_t seed, int repeats, int threads,
                      double* out_value) {
  return wrap([&] {
    if (ds == nullptr || kind == nullptr || metric == nullptr || out_value == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    *out_value = divmax::compute_baseline(
        ds->points, divmax::kind_from_name(kind), divmax::metric_from_name(metric),
        static_cast<std::size_t>(k), static_cast<std::size_t>(kprime),
        static_cast<std::size_t>(ell), seed, repeats, threads);
  });
}

dm_status dm_throughput(const dm_dataset* ds, const char* metric, const char* variant,
                        int64_t k, int64_t kprime, int timing, dm_record* out) {
  return wrap([&] {
    if (ds == nullptr || metric == nullptr || variant == nullptr || out == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    *out = to_c(divmax::measure_throughput(ds->points, divmax::metric_from_name(metric),
                                           variant, static_cast<std::size_t>(k),
                                           static_cast<std::size_t>(kprime), timing != 0));
  });
}

void dm_record_csv_header(char* buf, size_t bufsz) {
  copy_str(buf, bufsz, divmax::experiment_csv_header());
}

dm_status dm_record_to_csv(const dm_record* r, char* buf, size_t bufsz) {
  return wrap([&] {
    if (r == nullptr || buf == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    const std::string row = divmax::experiment_to_csv(from_c(*r));
    if (row.size() + 1 > bufsz) {
      divmax::raise(divmax::ErrorCode::argument, "buffer too small for CSV row");
    }
    copy_str(buf, bufsz, row);
  });
}

dm_status dm_record_from_csv(const char* line, dm_record* out) {
  return wrap([&] {
    if (line == nullptr || out == nullptr) {
      divmax::raise(divmax::ErrorCode::argument, "null argument");
    }
    *out = to_c(divmax::experiment_from_csv(line));
  });
}

const char* dm_last_error(void) { return g_last_error.c_str(); }

const char* dm_version(void) { return "0.1.0"; }

}  // extern "C"
