#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qvar/simulation.hpp"

namespace qvar {

/// Closed-form M/M/1 waiting-time moments. Dimensionless forms are evaluated
/// at rho = lambda/mu with mu = 1, then waits are rescaled by 1/mu and second
/// moments by 1/mu^2.
struct MM1Prediction {
  double lambda_norm = 0.0;
  double scale = 1.0;  // 1/mu
  double p_wait = 0.0;
  double mean_wait = 0.0;
  double second_moment_given_wait_fcfs = 0.0;
  double second_moment_given_wait_lcfs = 0.0;
  double var_wait_fcfs = 0.0;
  double var_wait_lcfs = 0.0;
};

MM1Prediction Mm1Predict(double lambda, double mu);

struct ConsistencyReport {
  double fcfs_reconstructed = 0.0;
  double lcfs_reconstructed = 0.0;
  double fcfs_rel_error = 0.0;
  double lcfs_rel_error = 0.0;
  bool ok = false;
};

inline constexpr double kConsistencyTolerance = 1e-12;

/// Checks p_wait * E[W^2 | W > 0] - E[W]^2 == Var[W] for both disciplines.
ConsistencyReport ConsistencyCheck(const MM1Prediction& pred,
                                   double rel_tol = kConsistencyTolerance);

struct LittleReport {
  double lhs = 0.0;  // time-average number in system
  double rhs = 0.0;  // lambda_eff * mean sojourn
  double relative_gap = 0.0;
};

LittleReport LittleCheck(const WaitStats& stats, double lambda_effective);

/// Per-discipline aggregate over seeds: plain averages of the per-seed
/// estimates, standard errors combined as sqrt(sum se^2) / k.
struct DisciplineSummary {
  Discipline discipline;
  std::size_t seed_count = 0;
  double mean_wait = 0.0;
  double se_mean = 0.0;
  double var_wait = 0.0;
  double se_var = 0.0;
  double p_wait = 0.0;
  double little_gap_max = 0.0;
  std::optional<double> predicted_var;
  std::vector<WaitStats> per_seed;
};

struct Comparison {
  std::vector<DisciplineSummary> rows;
  // Present when the oracle was requested.
  std::optional<MM1Prediction> oracle;

  const DisciplineSummary* Find(Discipline d) const;
  // Strict ordering with non-overlapping var_wait +- z*se_var intervals
  // along FCFS, RandomOrder, LCFS (whichever are present).
  bool VarianceOrderingHolds(double z) const;
};

struct CompareOptions {
  std::vector<Discipline> disciplines = {Discipline::kFcfs,
                                         Discipline::kRandomOrder,
                                         Discipline::kLcfs};
  double warmup_fraction = kDefaultWarmupFraction;
  std::size_t batches = kDefaultBatches;
  bool attach_oracle = false;
  // 0 means QVAR_THREADS or the hardware concurrency.
  std::size_t threads = 0;
};

/// Runs every (discipline, seed) pair on `base` with the seed replaced;
/// results are reduced in seed order regardless of completion order.
Comparison CompareDisciplines(const SimConfig& base,
                              const std::vector<std::uint64_t>& seeds,
                              const CompareOptions& options = {});

std::size_t DefaultThreadCount();

}  // namespace qvar
