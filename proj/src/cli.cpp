#include "qvar/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qvar/analytics.hpp"
#include "qvar/io.hpp"
#include "qvar/permutation_analysis.hpp"
#include "qvar/rng.hpp"
#include "qvar/simulation.hpp"

namespace qvar::cli {

namespace {

// Thrown for anything the user got wrong; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimFlags {
  double lambda = 0.5;
  double mu = 1.0;
  std::string discipline = "fcfs";
  std::uint64_t arrivals = 100000;
  std::uint64_t seed = 0;
  std::string arrival_dist = "exponential";
  std::string service_dist = "exponential";
  std::string coupling = "position";
  double warmup = kDefaultWarmupFraction;
  std::string out;
  std::string manifest;
  std::string format;
  std::string trace;
};

void AddSimFlags(CLI::App* cmd, SimFlags& f) {
  cmd->add_option("--lambda", f.lambda, "arrival rate");
  cmd->add_option("--mu", f.mu, "service rate");
  cmd->add_option("--arrivals", f.arrivals, "number of arrivals to simulate");
  cmd->add_option("--arrival-dist", f.arrival_dist,
                  "exponential | deterministic | uniform[:LO:HI]");
  cmd->add_option("--service-dist", f.service_dist,
                  "exponential | deterministic | uniform[:LO:HI]");
  cmd->add_option("--coupling", f.coupling, "position | customer")
      ->check(CLI::IsMember({"position", "customer"}));
  cmd->add_option("--warmup", f.warmup, "fraction of customers discarded");
  cmd->add_option("--out", f.out, "write results here (manifest goes to PATH.manifest.json)");
  cmd->add_option("--manifest", f.manifest, "explicit manifest path");
  cmd->add_option("--format", f.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

SimConfig BuildConfig(const SimFlags& f) {
  if (!(f.lambda > 0.0) || !(f.mu > 0.0)) throw UsageError("rates must be positive");
  if (f.arrivals == 0) throw UsageError("--arrivals must be positive");
  if (!(f.warmup >= 0.0 && f.warmup < 1.0)) throw UsageError("--warmup must lie in [0, 1)");
  SimConfig cfg;
  try {
    cfg.interarrival = Distribution::Parse(f.arrival_dist, f.lambda);
    cfg.service = Distribution::Parse(f.service_dist, f.mu);
    cfg.discipline = ParseDiscipline(f.discipline);
    cfg.coupling = ParseCoupling(f.coupling);
    cfg.num_arrivals = f.arrivals;
    cfg.seed = f.seed;
    cfg.Validate(/*require_stable=*/true);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnstable) throw UsageError("unstable configuration");
    throw UsageError(e.what());
  }
  return cfg;
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << contents;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

// Writes `body` to --out (or stdout) and the manifest next to it.
void Emit(const SimFlags& f, const std::string& command,
          const std::vector<std::string>& args, const Json& config,
          const std::string& body, std::ostream& out) {
  if (f.out.empty()) {
    out << body;
  } else {
    WriteFile(f.out, body);
  }
  std::string manifest_path = f.manifest;
  if (manifest_path.empty() && !f.out.empty()) manifest_path = f.out + ".manifest.json";
  if (manifest_path.empty()) return;
  Json outputs = Json::object();
  outputs["results"] = f.out.empty() ? Json(nullptr) : Json(f.out);
  outputs["trace"] = f.trace.empty() ? Json(nullptr) : Json(f.trace);
  const Json manifest = {{"tool", "qvar"},
                         {"version", kToolVersion},
                         {"command", command},
                         {"args", args},
                         {"config", config},
                         {"timestamp", Timestamp()},
                         {"outputs", outputs}};
  WriteFile(manifest_path, manifest.dump(2) + "\n");
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      seeds.push_back(std::stoull(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("bad seed '" + item + "'");
  }
  if (seeds.empty()) throw UsageError("--seeds needs at least one seed");
  return seeds;
}

std::vector<BusyPeriod> LoadInput(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  try {
    return ReadBusyPeriods(f);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int Simulate(const SimFlags& f, const std::vector<std::string>& args, std::ostream& out) {
  const SimConfig cfg = BuildConfig(f);
  const SimTrace trace = RunSimulation(cfg);
  if (!f.trace.empty()) {
    std::ofstream t(f.trace, std::ios::binary);
    if (!t) throw std::runtime_error("cannot open " + f.trace);
    WriteTraceJsonl(t, trace);
  }
  const WaitStats stats = ComputeStats(trace, f.warmup);
  const std::string body =
      f.format == "csv" ? WaitStatsCsv(stats) : ToJson(stats).dump() + "\n";
  Json config = ToJson(cfg);
  config["warmup"] = f.warmup;
  Emit(f, "simulate", args, config, body, out);
  return kExitOk;
}

int Compare(const SimFlags& f, const std::string& seeds_text,
            const std::string& disciplines_text, bool oracle,
            const std::vector<std::string>& args, std::ostream& out) {
  const SimConfig cfg = BuildConfig(f);
  const auto seeds = ParseSeeds(seeds_text);
  CompareOptions opts;
  opts.warmup_fraction = f.warmup;
  opts.attach_oracle = oracle;
  if (!disciplines_text.empty()) {
    opts.disciplines.clear();
    std::stringstream ss(disciplines_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        opts.disciplines.push_back(ParseDiscipline(item));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (oracle && (cfg.interarrival.kind != Distribution::Kind::kExponential ||
                 cfg.service.kind != Distribution::Kind::kExponential)) {
    throw UsageError("--oracle needs exponential arrival and service distributions");
  }
  const Comparison cmp = CompareDisciplines(cfg, seeds, opts);
  const std::string body =
      f.format == "json" ? ToJson(cmp).dump() + "\n" : ComparisonCsv(cmp);
  Json config = ToJson(cfg);
  config.erase("discipline");
  config.erase("seed");
  config["seeds"] = seeds;
  config["warmup"] = f.warmup;
  Emit(f, "compare", args, config, body, out);
  return kExitOk;
}

int Enumerate(const std::string& input, std::size_t random_count, std::size_t max_n,
              std::uint64_t seed, std::ostream& out, std::ostream& err) {
  std::vector<BusyPeriod> instances;
  if (!input.empty()) {
    instances = LoadInput(input);
  } else {
    if (max_n == 0) throw UsageError("--max-n must be positive");
    auto rng = MakeStream(seed, StreamId::kDecisions);
    for (std::size_t r = 0; r < random_count; ++r) {
      instances.push_back(RandomBusyPeriod(1 + UniformIndex(rng, max_n), rng));
    }
  }
  const std::size_t cap = input.empty() ? max_n : std::max(max_n, kDefaultMaxEnumerate);
  std::size_t violations = 0;
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    ExtremalityReport report;
    try {
      report = CheckExtremality(instances[idx], cap);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kTooLarge) throw UsageError(e.what());
      throw;
    }
    Json line = ToJson(report);
    line["instance"] = idx + 1;
    out << line.dump() << '\n';
    if (!report.holds()) ++violations;
  }
  if (violations) {
    err << "theorem violation: " << violations << " of " << instances.size()
        << " instances failed the extremality check\n";
    return kExitTheoremViolation;
  }
  return kExitOk;
}

int Descent(const std::string& input, std::size_t random_n, const std::string& start,
            std::uint64_t seed, std::ostream& out) {
  std::vector<BusyPeriod> instances;
  auto rng = MakeStream(seed, StreamId::kDecisions);
  if (!input.empty()) {
    instances = LoadInput(input);
  } else if (random_n > 0) {
    instances.push_back(RandomBusyPeriod(random_n, rng));
  } else {
    throw UsageError("descent needs --input or --random-n");
  }
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const BusyPeriod& bp = instances[idx];
    const Permutation p0 = start == "random" ? RandomRealizable(bp, rng)
                                             : Permutation::Identity(bp.size());
    const DescentTrace trace = DescentToLcfs(bp, p0);
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      Json line = ToJson(trace.steps[s], s);
      line["instance"] = idx + 1;
      out << line.dump() << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-server queueing discipline laboratory", "qvar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "run one simulation and report waiting-time statistics");
  AddSimFlags(simulate, sim);
  simulate->add_option("--discipline", sim.discipline, "fcfs | lcfs | random")
      ->check(CLI::IsMember({"fcfs", "lcfs", "random"}));
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--trace", sim.trace, "stream the customer trace here as JSON lines");

  SimFlags cmpf;
  cmpf.format = "csv";
  std::string seeds_text = "1";
  std::string disciplines_text;
  bool oracle = false;
  auto* compare = app.add_subcommand("compare", "compare disciplines over several seeds");
  AddSimFlags(compare, cmpf);
  compare->add_option("--seeds", seeds_text, "comma-separated seed list");
  compare->add_option("--disciplines", disciplines_text, "comma-separated subset of fcfs,lcfs,random");
  compare->add_flag("--oracle", oracle, "attach M/M/1 closed-form predictions");

  std::string enum_input;
  std::size_t enum_random = 0;
  std::size_t enum_max_n = kDefaultMaxEnumerate;
  std::uint64_t enum_seed = 0;
  auto* enumerate = app.add_subcommand("enumerate", "exhaustive extremality check over realizable permutations");
  auto* enum_in = enumerate->add_option("--input", enum_input, "busy-period JSON file");
  auto* enum_rand = enumerate->add_option("--random", enum_random, "number of random instances");
  enum_in->excludes(enum_rand);
  enumerate->add_option("--max-n", enum_max_n, "largest instance size");
  enumerate->add_option("--seed", enum_seed, "random seed");

  std::string descent_input;
  std::size_t descent_random_n = 0;
  std::string descent_start = "identity";
  std::uint64_t descent_seed = 0;
  auto* descent = app.add_subcommand("descent", "stream the exchange descent to the LCFS permutation");
  auto* d_in = descent->add_option("--input", descent_input, "busy-period JSON file");
  auto* d_rand = descent->add_option("--random-n", descent_random_n, "use one random instance of this size");
  d_in->excludes(d_rand);
  descent->add_option("--start", descent_start, "identity | random")
      ->check(CLI::IsMember({"identity", "random"}));
  descent->add_option("--seed", descent_seed, "random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      if (sim.format.empty()) sim.format = "json";
      return Simulate(sim, args, out);
    }
    if (compare->parsed()) return Compare(cmpf, seeds_text, disciplines_text, oracle, args, out);
    if (enumerate->parsed()) {
      if (enum_input.empty() && enum_random == 0) {
        throw UsageError("enumerate needs --input or --random");
      }
      return Enumerate(enum_input, enum_random, enum_max_n, enum_seed, out, err);
    }
    if (descent->parsed()) {
      return Descent(descent_input, descent_random_n, descent_start, descent_seed, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace qvar::cli
