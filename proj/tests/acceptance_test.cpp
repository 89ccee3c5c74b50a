// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.
// Exit status: 0 all pass, 3 if a theorem-level check failed, 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "qvar/analytics.hpp"
#include "qvar/cli.hpp"
#include "qvar/permutation_analysis.hpp"
#include "qvar/rng.hpp"
#include "qvar/simulation.hpp"

namespace {

using namespace qvar;

constexpr std::uint64_t kArrivals = 1000000;
constexpr double kWarmup = 0.1;
constexpr double kSigmaBand = 3.0;
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile
constexpr double kPWaitTol = 0.01;
constexpr double kMeanWaitTol = 0.02;
constexpr double kLittleTol = 0.02;
constexpr double kConservationRelTol = 1e-9;
constexpr std::size_t kRandomInstances = 1000;
constexpr std::size_t kExtremalityMaxN = 7;
constexpr std::size_t kDescentMaxN = 10;

std::vector<std::uint64_t> Seeds() {
  std::vector<std::uint64_t> s;
  for (std::uint64_t k = 1; k <= 10; ++k) s.push_back(k);
  return s;
}

SimConfig Base(Distribution service, double lambda) {
  SimConfig cfg;
  cfg.interarrival = Distribution::Exponential(lambda);
  cfg.service = service;
  cfg.num_arrivals = kArrivals;
  return cfg;
}

struct Outcome {
  bool pass;
  std::string detail;
};

bool g_theorem_violation = false;
int g_failures = 0;

void Report(const char* id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, name, secs,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

}  // namespace

int main() {
  CompareOptions opts;
  opts.warmup_fraction = kWarmup;
  opts.attach_oracle = true;
  Comparison mm1;

  Report("AC1", "M/M/1 variance reproduction", [&] {
    mm1 = CompareDisciplines(Base(Distribution::Exponential(1.0), 0.5), Seeds(), opts);
    const auto* f = mm1.Find(Discipline::kFcfs);
    const auto* l = mm1.Find(Discipline::kLcfs);
    const bool ok = std::abs(f->var_wait - 3.0) <= kSigmaBand * f->se_var &&
                    std::abs(l->var_wait - 7.0) <= kSigmaBand * l->se_var;
    return Outcome{ok, Fmt("FCFS %.4f +- %.4f (target 3), LCFS %.4f +- %.4f (target 7)",
                           f->var_wait, f->se_var, l->var_wait, l->se_var)};
  });

  Report("AC2", "Auxiliary M/M/1 statistics", [&] {
    bool ok = !mm1.rows.empty();
    double worst_p = 0, worst_m = 0;
    for (const auto& row : mm1.rows) {
      for (const auto& s : row.per_seed) {
        worst_p = std::max(worst_p, std::abs(s.frac_waiting - 0.5));
        worst_m = std::max(worst_m, std::abs(s.mean_wait - 1.0));
      }
    }
    ok = ok && worst_p <= kPWaitTol && worst_m <= kMeanWaitTol;
    return Outcome{ok, Fmt("max |P(W>0)-0.5| = %.5f, max |E[W]-1| = %.5f over 30 runs",
                           worst_p, worst_m)};
  });

  std::vector<BusyPeriod> enumerated;
  Report("AC3", "Extremality oracle", [&] {
    auto rng = MakeStream(2024, StreamId::kDecisions);
    for (std::size_t k = 0; k < kRandomInstances; ++k) {
      enumerated.push_back(RandomBusyPeriod(1 + UniformIndex(rng, kExtremalityMaxN), rng));
    }
    const std::size_t random_count = enumerated.size();
    const auto trace = RunSimulation(Base(Distribution::Exponential(1.0), 0.8));
    for (auto& p : ExtractBusyPeriods(trace)) {
      if (p.busy_period.size() <= kExtremalityMaxN) enumerated.push_back(std::move(p.busy_period));
    }
    std::size_t violations = 0;
    for (const auto& bp : enumerated) {
      const auto r = CheckExtremality(bp, kExtremalityMaxN);
      violations += !(r.lcfs_attains_min && r.identity_attains_max);
    }
    if (violations) g_theorem_violation = true;
    return Outcome{violations == 0,
                   Fmt("%.0f random + %.0f simulated (rho=0.8) instances, %.0f violations",
                       static_cast<double>(random_count),
                       static_cast<double>(enumerated.size() - random_count),
                       static_cast<double>(violations))};
  });

  Report("AC4", "Descent certificate", [&] {
    auto rng = MakeStream(77, StreamId::kDecisions);
    std::size_t failures = 0, swaps = 0;
    for (std::size_t k = 0; k < kRandomInstances; ++k) {
      const auto bp = RandomBusyPeriod(1 + UniformIndex(rng, kDescentMaxN), rng);
      const auto trace = DescentToLcfs(bp, RandomRealizable(bp, rng));
      bool ok = trace.final_permutation == LcfsPermutation(bp) &&
                trace.swap_count() <= trace.initial_bad_pairs;
      for (const auto& s : trace.steps) {
        if (s.kind != DescentStep::Kind::kSwap) continue;
        ++swaps;
        ok = ok && s.objective_after < s.objective_before &&
             s.bad_pairs_after < s.bad_pairs_before && IsRealizable(bp, s.after);
      }
      failures += !ok;
    }
    if (failures) g_theorem_violation = true;
    return Outcome{failures == 0, Fmt("%.0f instances (n<=10), %.0f swap steps, %.0f failures",
                                      kRandomInstances, static_cast<double>(swaps),
                                      static_cast<double>(failures))};
  });

  Report("AC5", "Uniqueness of the LCFS permutation", [&] {
    std::size_t failures = 0;
    for (const auto& bp : enumerated) {
      const auto r = CheckExtremality(bp, kExtremalityMaxN);
      failures += !(r.zero_bad_pair_members == 1 && r.zero_bad_pair_member_is_lcfs);
    }
    if (failures) g_theorem_violation = true;
    return Outcome{!enumerated.empty() && failures == 0,
                   Fmt("%.0f instances, %.0f with other than exactly one zero-bad-pair member",
                       static_cast<double>(enumerated.size()), static_cast<double>(failures))};
  });

  Report("AC6", "Mean-wait conservation", [&] {
    std::size_t periods = 0, bitwise_mismatch = 0;
    double worst_period_rel = 0, worst_mean_rel = 0;
    for (auto seed : Seeds()) {
      std::vector<std::vector<double>> ref_b, ref_wsum;
      std::vector<double> ref_exact;
      double ref_mean = 0;
      for (auto d : {Discipline::kFcfs, Discipline::kLcfs, Discipline::kRandomOrder}) {
        SimConfig cfg = Base(Distribution::Exponential(1.0), 0.5);
        cfg.seed = seed;
        cfg.discipline = d;
        const auto trace = RunSimulation(cfg);
        const auto extracted = ExtractBusyPeriods(trace);
        std::vector<std::vector<double>> bs;
        std::vector<double> exact, wsum;
        for (const auto& p : extracted) {
          const auto& bp = p.busy_period;
          bs.emplace_back(bp.service_starts().begin(), bp.service_starts().end());
          double sb = 0, sa = 0, sw = 0;
          for (double x : bp.service_starts()) sb += x;
          for (double x : bp.arrivals()) sa += x;
          for (double w : WaitingTimes(bp, p.realized)) sw += w;
          exact.push_back(sb - sa);
          wsum.push_back(sw);
        }
        const double mean = ComputeStats(trace, kWarmup).mean_wait;
        if (d == Discipline::kFcfs) {
          ref_b = bs;
          ref_exact = exact;
          ref_wsum = {wsum};
          ref_mean = mean;
          periods += exact.size();
          continue;
        }
        if (bs != ref_b || exact.size() != ref_exact.size()) {
          ++bitwise_mismatch;
          continue;
        }
        for (std::size_t k = 0; k < exact.size(); ++k) {
          if (std::memcmp(&exact[k], &ref_exact[k], sizeof(double)) != 0) ++bitwise_mismatch;
          const double base = ref_wsum[0][k];
          if (base > 0) worst_period_rel = std::max(worst_period_rel, std::abs(wsum[k] - base) / base);
          else if (wsum[k] != 0) worst_period_rel = 1;
        }
        worst_mean_rel = std::max(worst_mean_rel, std::abs(mean - ref_mean) / ref_mean);
      }
    }
    const bool ok = bitwise_mismatch == 0 && worst_period_rel <= kConservationRelTol &&
                    worst_mean_rel <= kConservationRelTol;
    return Outcome{ok, Fmt("%.0f busy periods x 3 disciplines, %.0f bitwise mismatches, "
                           "max per-period rel gap %.2e, max mean-wait rel gap %.2e",
                           static_cast<double>(periods), static_cast<double>(bitwise_mismatch),
                           worst_period_rel, worst_mean_rel)};
  });

  Report("AC7", "Little's law", [&] {
    double worst = 0;
    for (const auto& row : mm1.rows) {
      for (const auto& s : row.per_seed) {
        worst = std::max(worst, LittleCheck(s, s.arrival_rate).relative_gap);
      }
    }
    return Outcome{!mm1.rows.empty() && worst < kLittleTol,
                   Fmt("max relative gap %.5f over 30 runs (tolerance 0.02)", worst)};
  });

  Report("AC8", "Ordering beyond M/M/1", [&] {
    CompareOptions o;
    o.warmup_fraction = kWarmup;
    std::string detail;
    bool ok = true;
    struct Case {
      const char* name;
      Distribution service;
      double rho;
    };
    const Case cases[] = {{"M/D/1", Distribution::Deterministic(1.0), 0.5},
                          {"M/D/1", Distribution::Deterministic(1.0), 0.8},
                          {"M/U/1", Distribution::Uniform(0.0, 2.0), 0.5},
                          {"M/U/1", Distribution::Uniform(0.0, 2.0), 0.8}};
    for (const auto& c : cases) {
      const auto cmp = CompareDisciplines(Base(c.service, c.rho), Seeds(), o);
      const bool holds = cmp.VarianceOrderingHolds(kZ99);
      ok = ok && holds;
      const auto* f = cmp.Find(Discipline::kFcfs);
      const auto* r = cmp.Find(Discipline::kRandomOrder);
      const auto* l = cmp.Find(Discipline::kLcfs);
      detail += std::string(c.name) +
                Fmt(" rho=%.1f: %.3f(%.3f) < %.3f", c.rho, f->var_wait, f->se_var, r->var_wait) +
                Fmt("(%.3f) < %.3f(%.3f)", r->se_var, l->var_wait, l->se_var) +
                (holds ? "; " : " [overlap]; ");
    }
    return Outcome{ok, detail};
  });

  Report("AC9", "Oracle self-consistency", [&] {
    bool ok = true;
    double worst = 0;
    for (int k = 1; k <= 9; ++k) {
      const auto p = Mm1Predict(k / 10.0, 1.0);
      const auto r = ConsistencyCheck(p, 1e-12);
      worst = std::max({worst, r.fcfs_rel_error, r.lcfs_rel_error});
      ok = ok && r.ok && p.var_wait_lcfs > p.var_wait_fcfs;
    }
    return Outcome{ok, Fmt("rho in {0.1..0.9}, max relative error %.2e", worst)};
  });

  std::printf("%d criteria failed\n", g_failures);
  if (g_theorem_violation) return cli::kExitTheoremViolation;
  return g_failures ? 1 : 0;
}
