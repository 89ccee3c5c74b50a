#include "qvar/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "qvar/rng.hpp"

namespace qvar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ParseNumber(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::kParse, "not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

Distribution Distribution::Exponential(double rate) {
  Distribution d;
  d.kind = Kind::kExponential;
  d.rate = rate;
  return d;
}

Distribution Distribution::Deterministic(double value) {
  Distribution d;
  d.kind = Kind::kDeterministic;
  d.value = value;
  return d;
}

Distribution Distribution::Uniform(double lo, double hi) {
  Distribution d;
  d.kind = Kind::kUniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Distribution Distribution::Parse(std::string_view text, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidRate, "rate must be positive and finite");
  }
  if (text == "exponential" || text == "exp") return Exponential(rate);
  if (text == "deterministic" || text == "det") return Deterministic(1.0 / rate);
  if (text == "uniform") return Uniform(0.0, 2.0 / rate);
  constexpr std::string_view kPrefix = "uniform:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    const auto rest = text.substr(kPrefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "expected uniform:LO:HI");
    }
    return Uniform(ParseNumber(rest.substr(0, colon)),
                   ParseNumber(rest.substr(colon + 1)));
  }
  throw Error(ErrorCode::kParse, "unknown distribution '" + std::string(text) + "'");
}

double Distribution::Mean() const {
  switch (kind) {
    case Kind::kExponential: return 1.0 / rate;
    case Kind::kDeterministic: return value;
    case Kind::kUniform: return 0.5 * (lo + hi);
  }
  return kNaN;
}

std::string Distribution::ToString() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kExponential: os << "exponential(" << rate << ')'; break;
    case Kind::kDeterministic: os << "deterministic(" << value << ')'; break;
    case Kind::kUniform: os << "uniform(" << lo << ',' << hi << ')'; break;
  }
  return os.str();
}

void Distribution::Validate() const {
  switch (kind) {
    case Kind::kExponential:
      if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw Error(ErrorCode::kInvalidRate, "exponential rate must be positive");
      }
      break;
    case Kind::kDeterministic:
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::kInvalidRate, "deterministic value must be positive");
      }
      break;
    case Kind::kUniform:
      if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(hi)) {
        throw Error(ErrorCode::kInvalidConfig, "uniform bounds need 0 <= lo < hi");
      }
      break;
  }
}

double SampleVariate(const Distribution& dist, std::mt19937_64& rng) {
  switch (dist.kind) {
    case Distribution::Kind::kExponential:
      return -std::log(UnitInterval(rng)) / dist.rate;
    case Distribution::Kind::kDeterministic:
      return dist.value;
    case Distribution::Kind::kUniform:
      return dist.lo + (dist.hi - dist.lo) * UnitInterval(rng);
  }
  return kNaN;
}

std::string_view DisciplineName(Discipline d) {
  switch (d) {
    case Discipline::kFcfs: return "fcfs";
    case Discipline::kLcfs: return "lcfs";
    case Discipline::kRandomOrder: return "random";
  }
  return "?";
}

Discipline ParseDiscipline(std::string_view text) {
  if (text == "fcfs") return Discipline::kFcfs;
  if (text == "lcfs") return Discipline::kLcfs;
  if (text == "random") return Discipline::kRandomOrder;
  throw Error(ErrorCode::kParse, "unknown discipline '" + std::string(text) + "'");
}

std::string_view CouplingName(Coupling c) {
  return c == Coupling::kPositionAttached ? "position" : "customer";
}

Coupling ParseCoupling(std::string_view text) {
  if (text == "position") return Coupling::kPositionAttached;
  if (text == "customer") return Coupling::kCustomerAttached;
  throw Error(ErrorCode::kParse, "unknown coupling '" + std::string(text) + "'");
}

void SimConfig::Validate(bool require_stable) const {
  interarrival.Validate();
  service.Validate();
  if (num_arrivals == 0) {
    throw Error(ErrorCode::kInvalidConfig, "num_arrivals must be positive");
  }
  if (num_arrivals > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidConfig, "num_arrivals too large");
  }
  if (require_stable && !(utilization() < 1.0)) {
    throw Error(ErrorCode::kUnstable,
                "unstable configuration: utilization " +
                    std::to_string(utilization()) + " >= 1");
  }
}

SimTrace RunSimulation(const SimConfig& cfg) {
  cfg.Validate();
  const std::size_t n = cfg.num_arrivals;
  auto arrival_rng = MakeStream(cfg.seed, StreamId::kArrivals);
  auto service_rng = MakeStream(cfg.seed, StreamId::kService);
  auto decision_rng = MakeStream(cfg.seed, StreamId::kDecisions);
  const bool position = cfg.coupling == Coupling::kPositionAttached;

  SimTrace trace;
  trace.customers.resize(n);
  std::vector<double> own_service;
  if (!position) own_service.resize(n);

  std::deque<std::uint32_t> waiting;
  std::size_t next_arrival = 0;
  double next_arrival_time = 0.0;
  bool busy = false;
  double completion_time = 0.0;

  auto start_service = [&](std::uint32_t c, double t) {
    const double duration =
        position ? SampleVariate(cfg.service, service_rng) : own_service[c];
    trace.customers[c].service_start = t;
    completion_time = t + duration;
    trace.customers[c].departure = completion_time;
    busy = true;
  };

  auto select_next = [&]() -> std::uint32_t {
    std::uint32_t c;
    switch (cfg.discipline) {
      case Discipline::kFcfs:
        c = waiting.front();
        waiting.pop_front();
        return c;
      case Discipline::kLcfs:
        c = waiting.back();
        waiting.pop_back();
        return c;
      case Discipline::kRandomOrder: {
        const auto pick = UniformIndex(decision_rng, waiting.size());
        c = waiting[pick];
        waiting[pick] = waiting.back();
        waiting.pop_back();
        return c;
      }
    }
    return 0;
  };

  while (next_arrival < n || busy) {
    // Completions win ties with arrivals.
    if (busy && (next_arrival >= n || completion_time <= next_arrival_time)) {
      if (waiting.empty()) {
        busy = false;
      } else {
        start_service(select_next(), completion_time);
      }
      continue;
    }
    const auto c = static_cast<std::uint32_t>(next_arrival);
    trace.customers[c].arrival = next_arrival_time;
    if (!position) own_service[c] = SampleVariate(cfg.service, service_rng);
    if (!busy) {
      trace.busy_period_starts.push_back(c);
      start_service(c, next_arrival_time);
    } else {
      waiting.push_back(c);
    }
    if (++next_arrival < n) {
      next_arrival_time += SampleVariate(cfg.interarrival, arrival_rng);
    }
  }
  return trace;
}

std::vector<ExtractedPeriod> ExtractBusyPeriods(const SimTrace& trace) {
  const auto& cs = trace.customers;
  const auto& starts = trace.busy_period_starts;
  if (!cs.empty() && (starts.empty() || starts.front() != 0)) {
    throw Error(ErrorCode::kMalformedTrace, "first customer must open a busy period");
  }
  std::vector<ExtractedPeriod> out;
  out.reserve(starts.size());
  std::vector<std::uint32_t> order;
  double previous_end = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const std::size_t first = starts[p];
    const std::size_t last = p + 1 < starts.size() ? starts[p + 1] : cs.size();
    if (last <= first) {
      throw Error(ErrorCode::kMalformedTrace, "busy period boundaries not increasing");
    }
    const std::size_t m = last - first;

    order.resize(m);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
      return cs[first + x].service_start < cs[first + y].service_start;
    });

    const CustomerRecord& opener = cs[first];
    if (opener.service_start != opener.arrival || opener.arrival < previous_end) {
      throw Error(ErrorCode::kMalformedTrace,
                  "busy period opened at customer " + std::to_string(first + 1) +
                      " while the server was not idle");
    }
    std::vector<double> a(m), b(m);
    std::vector<std::uint32_t> rank(m);
    for (std::size_t r = 0; r < m; ++r) {
      const CustomerRecord& c = cs[first + order[r]];
      if (!(c.arrival <= c.service_start && c.service_start < c.departure)) {
        throw Error(ErrorCode::kMalformedTrace,
                    "customer " + std::to_string(first + order[r] + 1) +
                        " violates arrival <= start < departure");
      }
      if (r > 0 && c.service_start != cs[first + order[r - 1]].departure) {
        throw Error(ErrorCode::kMalformedTrace,
                    "server idled inside busy period " + std::to_string(p + 1));
      }
      b[r] = c.service_start;
      rank[order[r]] = static_cast<std::uint32_t>(r);
    }
    for (std::size_t i = 0; i < m; ++i) a[i] = cs[first + i].arrival;
    previous_end = cs[first + order[m - 1]].departure;
    if (last < cs.size() && !(cs[last].arrival >= previous_end)) {
      throw Error(ErrorCode::kMalformedTrace,
                  "customer " + std::to_string(last + 1) +
                      " opened a busy period before the server freed");
    }
    out.push_back({first, ValidateBusyPeriod(std::move(a), std::move(b)),
                   Permutation(std::move(rank))});
    if (!IsRealizable(out.back().busy_period, out.back().realized)) {
      throw Error(ErrorCode::kMalformedTrace, "realized permutation not realizable");
    }
  }
  return out;
}

WaitStats ComputeStats(const SimTrace& trace, double warmup_fraction,
                       std::size_t batches) {
  if (!(warmup_fraction >= 0.0) || !(warmup_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "warmup fraction must lie in [0, 1)");
  }
  if (batches == 0) throw Error(ErrorCode::kInvalidConfig, "batches must be positive");
  const auto& cs = trace.customers;
  const std::size_t total = cs.size();
  auto cut = static_cast<std::size_t>(std::floor(warmup_fraction * static_cast<double>(total)));
  const auto& starts = trace.busy_period_starts;
  const auto it = std::lower_bound(starts.begin(), starts.end(), cut);
  cut = it == starts.end() ? total : *it;
  if (cut >= total) {
    throw Error(ErrorCode::kEmptyAfterWarmup, "no busy period starts after the warmup cut");
  }

  WaitStats s;
  s.warmup_customers = cut;
  s.count = total - cut;
  const double count = static_cast<double>(s.count);

  double sum_w = 0.0, sum_v = 0.0, sum_w2_pos = 0.0;
  std::size_t waited = 0;
  for (std::size_t i = cut; i < total; ++i) {
    const double w = cs[i].wait();
    sum_w += w;
    sum_v += cs[i].service();
    if (w > 0.0) {
      ++waited;
      sum_w2_pos += w * w;
    }
  }
  s.mean_wait = sum_w / count;
  s.mean_service = sum_v / count;
  s.mean_sojourn = s.mean_wait + s.mean_service;
  s.frac_waiting = static_cast<double>(waited) / count;
  s.second_moment_given_wait = waited ? sum_w2_pos / static_cast<double>(waited) : kNaN;

  double ss = 0.0;
  for (std::size_t i = cut; i < total; ++i) {
    const double d = cs[i].wait() - s.mean_wait;
    ss += d * d;
  }
  s.var_wait = s.count > 1 ? ss / (count - 1.0) : 0.0;

  // Number in system integrated over [first retained arrival, last arrival].
  // The cut sits on a busy period start, so nobody from the warmup is present.
  const double t0 = cs[cut].arrival;
  double t1 = cs[total - 1].arrival;
  if (!(t1 > t0)) {
    t1 = t0;
    for (std::size_t i = cut; i < total; ++i) t1 = std::max(t1, cs[i].departure);
  }
  s.horizon = t1 - t0;
  if (s.horizon > 0.0) {
    double area = 0.0;
    for (std::size_t i = cut; i < total; ++i) {
      const double lo = std::max(cs[i].arrival, t0);
      const double hi = std::min(cs[i].departure, t1);
      if (hi > lo) area += hi - lo;
    }
    s.time_avg_in_system = area / s.horizon;
    s.arrival_rate = count / s.horizon;
  } else {
    s.time_avg_in_system = 0.0;
    s.arrival_rate = 0.0;
  }

  // Batch means over contiguous runs of retained customers.
  s.batches = batches;
  const std::size_t per = s.count / batches;
  if (per < 2 || batches < 2) {
    s.se_mean_wait = kNaN;
    s.se_var_wait = kNaN;
    return s;
  }
  std::vector<double> bmean(batches), bvar(batches);
  for (std::size_t k = 0; k < batches; ++k) {
    const std::size_t lo = cut + k * per;
    const std::size_t hi = k + 1 == batches ? total : lo + per;
    double bs = 0.0;
    for (std::size_t i = lo; i < hi; ++i) bs += cs[i].wait();
    const double bm = bs / static_cast<double>(hi - lo);
    double bss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = cs[i].wait() - bm;
      bss += d * d;
    }
    bmean[k] = bm;
    bvar[k] = bss / static_cast<double>(hi - lo - 1);
  }
  auto standard_error = [&](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    const double var = acc / static_cast<double>(v.size() - 1);
    return std::sqrt(var / static_cast<double>(v.size()));
  };
  s.se_mean_wait = standard_error(bmean);
  s.se_var_wait = standard_error(bvar);
  return s;
}

}  // namespace qvar
