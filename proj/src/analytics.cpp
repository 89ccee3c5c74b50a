#include "qvar/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace qvar {

MM1Prediction Mm1Predict(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kInvalidRate, "rates must be positive and finite");
  }
  if (!(lambda < mu)) {
    throw Error(ErrorCode::kUnstable, "unstable configuration: lambda >= mu");
  }
  const double r = lambda / mu;
  const double q = 1.0 - r;
  const double s = 1.0 / mu;
  MM1Prediction p;
  p.lambda_norm = r;
  p.scale = s;
  p.p_wait = r;
  p.mean_wait = r / q * s;
  p.second_moment_given_wait_fcfs = 2.0 / (q * q) * s * s;
  p.second_moment_given_wait_lcfs = 2.0 / (q * q * q) * s * s;
  p.var_wait_fcfs = r * (2.0 - r) / (q * q) * s * s;
  p.var_wait_lcfs = r * (2.0 - r + r * r) / (q * q * q) * s * s;
  return p;
}

ConsistencyReport ConsistencyCheck(const MM1Prediction& pred, double rel_tol) {
  ConsistencyReport r;
  const double m2 = pred.mean_wait * pred.mean_wait;
  r.fcfs_reconstructed = pred.p_wait * pred.second_moment_given_wait_fcfs - m2;
  r.lcfs_reconstructed = pred.p_wait * pred.second_moment_given_wait_lcfs - m2;
  r.fcfs_rel_error = std::abs(r.fcfs_reconstructed - pred.var_wait_fcfs) /
                     std::abs(pred.var_wait_fcfs);
  r.lcfs_rel_error = std::abs(r.lcfs_reconstructed - pred.var_wait_lcfs) /
                     std::abs(pred.var_wait_lcfs);
  r.ok = r.fcfs_rel_error <= rel_tol && r.lcfs_rel_error <= rel_tol;
  return r;
}

LittleReport LittleCheck(const WaitStats& stats, double lambda_effective) {
  LittleReport r;
  r.lhs = stats.time_avg_in_system;
  r.rhs = lambda_effective * stats.mean_sojourn;
  if (r.rhs != 0.0) {
    r.relative_gap = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  } else {
    r.relative_gap = r.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r;
}

const DisciplineSummary* Comparison::Find(Discipline d) const {
  for (const auto& row : rows) {
    if (row.discipline == d) return &row;
  }
  return nullptr;
}

bool Comparison::VarianceOrderingHolds(double z) const {
  std::vector<const DisciplineSummary*> chain;
  for (Discipline d : {Discipline::kFcfs, Discipline::kRandomOrder, Discipline::kLcfs}) {
    if (const auto* row = Find(d)) chain.push_back(row);
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const double upper_prev = chain[i - 1]->var_wait + z * chain[i - 1]->se_var;
    const double lower_next = chain[i]->var_wait - z * chain[i]->se_var;
    if (!(upper_prev < lower_next)) return false;
  }
  return true;
}

std::size_t DefaultThreadCount() {
  if (const char* env = std::getenv("QVAR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Comparison CompareDisciplines(const SimConfig& base,
                              const std::vector<std::uint64_t>& seeds,
                              const CompareOptions& options) {
  base.Validate();
  if (seeds.empty()) throw Error(ErrorCode::kInvalidConfig, "need at least one seed");
  if (options.disciplines.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "need at least one discipline");
  }

  Comparison cmp;
  if (options.attach_oracle) {
    if (base.interarrival.kind != Distribution::Kind::kExponential ||
        base.service.kind != Distribution::Kind::kExponential) {
      throw Error(ErrorCode::kInvalidConfig,
                  "the M/M/1 oracle needs exponential arrivals and service");
    }
    cmp.oracle = Mm1Predict(base.arrival_rate(), base.service_rate());
  }

  const std::size_t nd = options.disciplines.size();
  const std::size_t jobs = nd * seeds.size();
  std::vector<WaitStats> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
      try {
        SimConfig cfg = base;
        cfg.discipline = options.disciplines[job / seeds.size()];
        cfg.seed = seeds[job % seeds.size()];
        results[job] = ComputeStats(RunSimulation(cfg), options.warmup_fraction,
                                    options.batches);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min(jobs, options.threads ? options.threads : DefaultThreadCount());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const double k = static_cast<double>(seeds.size());
  for (std::size_t d = 0; d < nd; ++d) {
    DisciplineSummary row;
    row.discipline = options.disciplines[d];
    row.seed_count = seeds.size();
    double se_m2 = 0.0, se_v2 = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const WaitStats& st = results[d * seeds.size() + s];
      row.mean_wait += st.mean_wait;
      row.var_wait += st.var_wait;
      row.p_wait += st.frac_waiting;
      se_m2 += st.se_mean_wait * st.se_mean_wait;
      se_v2 += st.se_var_wait * st.se_var_wait;
      row.little_gap_max =
          std::max(row.little_gap_max, LittleCheck(st, st.arrival_rate).relative_gap);
      row.per_seed.push_back(st);
    }
    row.mean_wait /= k;
    row.var_wait /= k;
    row.p_wait /= k;
    row.se_mean = std::sqrt(se_m2) / k;
    row.se_var = std::sqrt(se_v2) / k;
    if (cmp.oracle) {
      if (row.discipline == Discipline::kFcfs) row.predicted_var = cmp.oracle->var_wait_fcfs;
      if (row.discipline == Discipline::kLcfs) row.predicted_var = cmp.oracle->var_wait_lcfs;
    }
    cmp.rows.push_back(std::move(row));
  }
  return cmp;
}

}  // namespace qvar
