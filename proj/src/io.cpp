#include "qvar/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qvar {

namespace {

Json Num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<double> NumberArray(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::kParse, std::string("missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorCode::kParse, std::string(key) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Json DistributionJson(const Distribution& d) {
  switch (d.kind) {
    case Distribution::Kind::kExponential:
      return {{"kind", "exponential"}, {"rate", d.rate}};
    case Distribution::Kind::kDeterministic:
      return {{"kind", "deterministic"}, {"value", d.value}};
    case Distribution::Kind::kUniform:
      return {{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
  }
  return nullptr;
}

}  // namespace

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json ToJson(const BusyPeriod& bp) {
  return {{"arrivals", std::vector<double>(bp.arrivals().begin(), bp.arrivals().end())},
          {"service_starts",
           std::vector<double>(bp.service_starts().begin(), bp.service_starts().end())}};
}

BusyPeriod BusyPeriodFromJson(const Json& j) {
  return ValidateBusyPeriod(NumberArray(j, "arrivals"), NumberArray(j, "service_starts"));
}

std::vector<BusyPeriod> ReadBusyPeriods(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  std::vector<BusyPeriod> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(BusyPeriodFromJson(item));
  } else {
    out.push_back(BusyPeriodFromJson(j));
  }
  return out;
}

Json ToJson(const Permutation& p) { return p.OneBased(); }

void WriteTraceJsonl(std::ostream& out, const SimTrace& trace) {
  std::size_t period = 0;
  for (std::size_t i = 0; i < trace.customers.size(); ++i) {
    while (period < trace.busy_period_starts.size() &&
           trace.busy_period_starts[period] <= i) {
      ++period;
    }
    const auto& c = trace.customers[i];
    Json line = {{"customer", i + 1},
                 {"busy_period", period},
                 {"arrival", c.arrival},
                 {"service_start", c.service_start},
                 {"departure", c.departure}};
    out << line.dump() << '\n';
  }
}

SimTrace ReadTraceJsonl(std::istream& in) {
  SimTrace trace;
  std::string line;
  std::size_t last_period = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
      const auto period = j.at("busy_period").get<std::size_t>();
      if (period != last_period) {
        trace.busy_period_starts.push_back(trace.customers.size());
        last_period = period;
      }
      trace.customers.push_back({j.at("arrival").get<double>(),
                                 j.at("service_start").get<double>(),
                                 j.at("departure").get<double>()});
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, e.what());
    }
  }
  return trace;
}

Json ToJson(const WaitStats& s) {
  return {{"count", s.count},
          {"warmup_customers", s.warmup_customers},
          {"mean_wait", Num(s.mean_wait)},
          {"var_wait", Num(s.var_wait)},
          {"second_moment_given_wait", Num(s.second_moment_given_wait)},
          {"frac_waiting", Num(s.frac_waiting)},
          {"mean_service", Num(s.mean_service)},
          {"mean_sojourn", Num(s.mean_sojourn)},
          {"time_avg_in_system", Num(s.time_avg_in_system)},
          {"arrival_rate", Num(s.arrival_rate)},
          {"horizon", Num(s.horizon)},
          {"batches", s.batches},
          {"se_mean_wait", Num(s.se_mean_wait)},
          {"se_var_wait", Num(s.se_var_wait)}};
}

std::string WaitStatsCsv(const WaitStats& s) {
  std::ostringstream os;
  os << "count,warmup_customers,mean_wait,var_wait,second_moment_given_wait,"
        "frac_waiting,mean_service,mean_sojourn,time_avg_in_system,arrival_rate,"
        "horizon,batches,se_mean_wait,se_var_wait\n";
  os << s.count << ',' << s.warmup_customers << ',' << FormatNumber(s.mean_wait) << ','
     << FormatNumber(s.var_wait) << ',' << FormatNumber(s.second_moment_given_wait) << ','
     << FormatNumber(s.frac_waiting) << ',' << FormatNumber(s.mean_service) << ','
     << FormatNumber(s.mean_sojourn) << ',' << FormatNumber(s.time_avg_in_system) << ','
     << FormatNumber(s.arrival_rate) << ',' << FormatNumber(s.horizon) << ',' << s.batches
     << ',' << FormatNumber(s.se_mean_wait) << ',' << FormatNumber(s.se_var_wait) << '\n';
  return os.str();
}

Json ToJson(const DescentStep& step, std::size_t index) {
  const bool swap = step.kind == DescentStep::Kind::kSwap;
  return {{"step", index + 1},
          {"kind", swap ? "swap" : "remove-reduction"},
          {"indices", {step.first + 1, step.second + 1}},
          {"permutation_before", ToJson(step.before)},
          {"permutation_after", ToJson(step.after)},
          {"objective_before", step.objective_before},
          {"objective_after", step.objective_after},
          {"bad_pairs_before", step.bad_pairs_before},
          {"bad_pairs_after", step.bad_pairs_after}};
}

void WriteDescentJsonl(std::ostream& out, const DescentTrace& trace) {
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    out << ToJson(trace.steps[s], s).dump() << '\n';
  }
}

Json ToJson(const ExtremalityReport& r) {
  return {{"n", r.n},
          {"realizable_count", r.realizable_count},
          {"min_A", r.min_a},
          {"max_A", r.max_a},
          {"argmin", ToJson(r.argmin)},
          {"argmax", ToJson(r.argmax)},
          {"lcfs_A", r.lcfs_a},
          {"identity_A", r.identity_a},
          {"lcfs_attains_min", r.lcfs_attains_min},
          {"identity_attains_max", r.identity_attains_max},
          {"zero_bad_pair_members", r.zero_bad_pair_members},
          {"holds", r.holds()}};
}

Json ToJson(const SimConfig& cfg) {
  return {{"arrival_rate", cfg.arrival_rate()},
          {"service_rate", cfg.service_rate()},
          {"arrival_dist", DistributionJson(cfg.interarrival)},
          {"service_dist", DistributionJson(cfg.service)},
          {"discipline", std::string(DisciplineName(cfg.discipline))},
          {"coupling", std::string(CouplingName(cfg.coupling))},
          {"num_arrivals", cfg.num_arrivals},
          {"seed", cfg.seed}};
}

Json ToJson(const MM1Prediction& p) {
  return {{"lambda_norm", p.lambda_norm},
          {"scale", p.scale},
          {"p_wait", p.p_wait},
          {"mean_wait", p.mean_wait},
          {"second_moment_given_wait_fcfs", p.second_moment_given_wait_fcfs},
          {"second_moment_given_wait_lcfs", p.second_moment_given_wait_lcfs},
          {"var_wait_fcfs", p.var_wait_fcfs},
          {"var_wait_lcfs", p.var_wait_lcfs}};
}

Json ToJson(const Comparison& c) {
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"discipline", std::string(DisciplineName(r.discipline))},
                    {"seed_count", r.seed_count},
                    {"mean_wait", Num(r.mean_wait)},
                    {"se_mean", Num(r.se_mean)},
                    {"var_wait", Num(r.var_wait)},
                    {"se_var", Num(r.se_var)},
                    {"p_wait", Num(r.p_wait)},
                    {"predicted_var", r.predicted_var ? Json(*r.predicted_var) : Json(nullptr)}});
  }
  Json out = {{"rows", rows}};
  out["oracle"] = c.oracle ? ToJson(*c.oracle) : Json(nullptr);
  return out;
}

std::string ComparisonCsv(const Comparison& c) {
  std::ostringstream os;
  os << "discipline,seed_count,mean_wait,se_mean,var_wait,se_var,p_wait,predicted_var\n";
  for (const auto& r : c.rows) {
    os << DisciplineName(r.discipline) << ',' << r.seed_count << ','
       << FormatNumber(r.mean_wait) << ',' << FormatNumber(r.se_mean) << ','
       << FormatNumber(r.var_wait) << ',' << FormatNumber(r.se_var) << ','
       << FormatNumber(r.p_wait) << ','
       << (r.predicted_var ? FormatNumber(*r.predicted_var) : std::string()) << '\n';
  }
  return os.str();
}

}  // namespace qvar
