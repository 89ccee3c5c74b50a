#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qvar/busy_period.hpp"

namespace qvar {

struct Distribution {
  enum class Kind { kExponential, kDeterministic, kUniform };

  Kind kind = Kind::kExponential;
  double rate = 1.0;   // exponential
  double value = 1.0;  // deterministic
  double lo = 0.0;     // uniform
  double hi = 2.0;

  static Distribution Exponential(double rate);
  static Distribution Deterministic(double value);
  static Distribution Uniform(double lo, double hi);

  // "exponential", "deterministic", "uniform" or "uniform:LO:HI". The named
  // forms without bounds take their mean from `rate`; bare "uniform" is
  // uniform(0, 2/rate).
  static Distribution Parse(std::string_view text, double rate);

  double Mean() const;
  std::string ToString() const;
  // Throws kInvalidConfig / kInvalidRate.
  void Validate() const;
};

/// One draw. Exponential is -ln(U) / rate with U in (0, 1].
double SampleVariate(const Distribution& dist, std::mt19937_64& rng);

enum class Discipline { kFcfs, kLcfs, kRandomOrder };
enum class Coupling { kPositionAttached, kCustomerAttached };

std::string_view DisciplineName(Discipline d);
Discipline ParseDiscipline(std::string_view text);
std::string_view CouplingName(Coupling c);
Coupling ParseCoupling(std::string_view text);

struct SimConfig {
  Distribution interarrival = Distribution::Exponential(0.5);
  Distribution service = Distribution::Exponential(1.0);
  Discipline discipline = Discipline::kFcfs;
  Coupling coupling = Coupling::kPositionAttached;
  std::uint64_t num_arrivals = 1000;
  std::uint64_t seed = 0;

  double arrival_rate() const { return 1.0 / interarrival.Mean(); }
  double service_rate() const { return 1.0 / service.Mean(); }
  double utilization() const { return service.Mean() / interarrival.Mean(); }

  // Throws on bad parameters; with require_stable also on utilization >= 1.
  void Validate(bool require_stable = false) const;
};

struct CustomerRecord {
  double arrival;
  double service_start;
  double departure;

  double wait() const { return service_start - arrival; }
  double service() const { return departure - service_start; }
};

struct SimTrace {
  // Indexed by arrival order.
  std::vector<CustomerRecord> customers;
  // Index of the customer whose arrival opens each busy period.
  std::vector<std::size_t> busy_period_starts;
};

SimTrace RunSimulation(const SimConfig& cfg);

struct ExtractedPeriod {
  std::size_t first_customer;
  BusyPeriod busy_period;
  Permutation realized;
};

/// Splits the trace at idle intervals. Throws kMalformedTrace when work
/// conservation or per-customer ordering is violated, and propagates
/// busy-period validation errors (e.g. ties from deterministic inputs).
std::vector<ExtractedPeriod> ExtractBusyPeriods(const SimTrace& trace);

inline constexpr double kDefaultWarmupFraction = 0.1;
inline constexpr std::size_t kDefaultBatches = 20;

struct WaitStats {
  std::size_t count = 0;
  std::size_t warmup_customers = 0;
  double mean_wait = 0.0;
  double var_wait = 0.0;  // unbiased
  double second_moment_given_wait = 0.0;  // NaN when nobody waited
  double frac_waiting = 0.0;
  double mean_service = 0.0;
  double mean_sojourn = 0.0;
  double time_avg_in_system = 0.0;
  double arrival_rate = 0.0;  // measured over the retained horizon
  double horizon = 0.0;
  std::size_t batches = 0;
  double se_mean_wait = 0.0;  // batch means; NaN when too few customers
  double se_var_wait = 0.0;
};

/// Statistics over the customers left after dropping the first
/// warmup_fraction of arrivals. The cut is moved forward to the next busy
/// period boundary so no busy period is split.
WaitStats ComputeStats(const SimTrace& trace,
                       double warmup_fraction = kDefaultWarmupFraction,
                       std::size_t batches = kDefaultBatches);

}  // namespace qvar
