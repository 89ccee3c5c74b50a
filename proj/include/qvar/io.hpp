#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qvar/analytics.hpp"
#include "qvar/busy_period.hpp"
#include "qvar/permutation_analysis.hpp"
#include "qvar/simulation.hpp"

namespace qvar {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// Busy periods: {"arrivals": [...], "service_starts": [...]}.
Json ToJson(const BusyPeriod& bp);
BusyPeriod BusyPeriodFromJson(const Json& j);
/// Accepts a single object or an array of objects. Throws kParse on malformed
/// JSON and busy-period errors on invalid contents.
std::vector<BusyPeriod> ReadBusyPeriods(std::istream& in);

Json ToJson(const Permutation& p);  // 1-based array

// Traces: one customer per line, 1-based customer and busy-period indices.
void WriteTraceJsonl(std::ostream& out, const SimTrace& trace);
SimTrace ReadTraceJsonl(std::istream& in);

Json ToJson(const WaitStats& s);  // flat; NaN becomes null
std::string WaitStatsCsv(const WaitStats& s);

Json ToJson(const DescentStep& step, std::size_t index);
void WriteDescentJsonl(std::ostream& out, const DescentTrace& trace);

Json ToJson(const ExtremalityReport& r);

Json ToJson(const SimConfig& cfg);
Json ToJson(const MM1Prediction& p);
Json ToJson(const Comparison& c);
// Columns: discipline,seed_count,mean_wait,se_mean,var_wait,se_var,p_wait,predicted_var
std::string ComparisonCsv(const Comparison& c);

// %.17g, with "nan"/"inf" spelled out.
std::string FormatNumber(double v);

}  // namespace qvar
