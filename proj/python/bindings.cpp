#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qvar/analytics.hpp"
#include "qvar/cli.hpp"
#include "qvar/io.hpp"
#include "qvar/permutation_analysis.hpp"
#include "qvar/rng.hpp"
#include "qvar/simulation.hpp"

namespace py = pybind11;

namespace {

// Permutations cross the boundary as 1-based integer lists.
qvar::Permutation ToPerm(const std::vector<std::int64_t>& one_based) {
  return qvar::Permutation::FromOneBased(one_based);
}

py::object ToPython(const qvar::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

qvar::SimConfig MakeConfig(double lambda, double mu, const std::string& discipline,
                           std::uint64_t arrivals, std::uint64_t seed,
                           const std::string& arrival_dist, const std::string& service_dist,
                           const std::string& coupling) {
  qvar::SimConfig cfg;
  cfg.interarrival = qvar::Distribution::Parse(arrival_dist, lambda);
  cfg.service = qvar::Distribution::Parse(service_dist, mu);
  cfg.discipline = qvar::ParseDiscipline(discipline);
  cfg.coupling = qvar::ParseCoupling(coupling);
  cfg.num_arrivals = arrivals;
  cfg.seed = seed;
  cfg.Validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Busy-period permutation analysis and single-server queue simulation";
  m.attr("__version__") = qvar::kToolVersion;

  py::register_exception<qvar::Error>(m, "QvarError", PyExc_ValueError);

  py::class_<qvar::BusyPeriod>(m, "BusyPeriod")
      .def_property_readonly("n", &qvar::BusyPeriod::size)
      .def_property_readonly("arrivals", [](const qvar::BusyPeriod& bp) {
        return std::vector<double>(bp.arrivals().begin(), bp.arrivals().end());
      })
      .def_property_readonly("service_starts", [](const qvar::BusyPeriod& bp) {
        return std::vector<double>(bp.service_starts().begin(), bp.service_starts().end());
      })
      .def("to_json", [](const qvar::BusyPeriod& bp) { return qvar::ToJson(bp).dump(); })
      .def("__repr__", [](const qvar::BusyPeriod& bp) {
        return "BusyPeriod(" + qvar::ToJson(bp).dump() + ")";
      });

  m.def("validate_busy_period", &qvar::ValidateBusyPeriod, py::arg("arrivals"),
        py::arg("service_starts"));
  m.def("busy_period_from_json", [](const std::string& text) {
    std::istringstream in(text);
    return qvar::ReadBusyPeriods(in);
  });
  m.def("random_busy_period", [](std::size_t n, std::uint64_t seed) {
    auto rng = qvar::MakeStream(seed, qvar::StreamId::kDecisions);
    return qvar::RandomBusyPeriod(n, rng);
  }, py::arg("n"), py::arg("seed") = 0);

  m.def("objective_a", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    return qvar::ObjectiveA(bp, ToPerm(p));
  });
  m.def("waiting_times", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    return qvar::WaitingTimes(bp, ToPerm(p));
  });
  m.def("sum_sq_wait", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    return qvar::SumSqWait(bp, ToPerm(p));
  });
  m.def("lcfs_permutation",
        [](const qvar::BusyPeriod& bp) { return qvar::LcfsPermutation(bp).OneBased(); });
  m.def("fcfs_permutation",
        [](const qvar::BusyPeriod& bp) { return qvar::FcfsPermutation(bp).OneBased(); });
  m.def("enumerate_pi", [](const qvar::BusyPeriod& bp, std::size_t max_n) {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& p : qvar::EnumerateRealizable(bp, max_n)) out.push_back(p.OneBased());
    return out;
  }, py::arg("bp"), py::arg("max_n") = qvar::kDefaultMaxEnumerate);
  m.def("bad_pairs", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& bad : qvar::BadPairs(bp, ToPerm(p))) out.emplace_back(bad.i + 1, bad.j + 1);
    return out;
  });
  m.def("proof_swap", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    const auto r = qvar::ProofSwap(bp, ToPerm(p));
    return py::make_tuple(r.permutation.OneBased(), py::make_tuple(r.i + 1, r.k + 1));
  });
  m.def("descent_to_lcfs", [](const qvar::BusyPeriod& bp, const std::vector<std::int64_t>& p) {
    const auto trace = qvar::DescentToLcfs(bp, ToPerm(p));
    py::list steps;
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      steps.append(ToPython(qvar::ToJson(trace.steps[s], s)));
    }
    return steps;
  });
  m.def("check_extremality", [](const qvar::BusyPeriod& bp, std::size_t max_n) {
    return ToPython(qvar::ToJson(qvar::CheckExtremality(bp, max_n)));
  }, py::arg("bp"), py::arg("max_n") = qvar::kDefaultMaxEnumerate);

  py::class_<qvar::SimTrace>(m, "SimTrace")
      .def_property_readonly("num_customers",
                             [](const qvar::SimTrace& t) { return t.customers.size(); })
      .def_property_readonly("arrivals", [](const qvar::SimTrace& t) {
        std::vector<double> v;
        for (const auto& c : t.customers) v.push_back(c.arrival);
        return v;
      })
      .def_property_readonly("service_starts", [](const qvar::SimTrace& t) {
        std::vector<double> v;
        for (const auto& c : t.customers) v.push_back(c.service_start);
        return v;
      })
      .def_property_readonly("departures", [](const qvar::SimTrace& t) {
        std::vector<double> v;
        for (const auto& c : t.customers) v.push_back(c.departure);
        return v;
      })
      .def_property_readonly("busy_period_starts", [](const qvar::SimTrace& t) {
        std::vector<std::size_t> v;
        for (auto s : t.busy_period_starts) v.push_back(s + 1);
        return v;
      })
      .def("to_jsonl", [](const qvar::SimTrace& t) {
        std::ostringstream os;
        qvar::WriteTraceJsonl(os, t);
        return os.str();
      });

  py::class_<qvar::WaitStats>(m, "WaitStats")
      .def_readonly("count", &qvar::WaitStats::count)
      .def_readonly("mean_wait", &qvar::WaitStats::mean_wait)
      .def_readonly("var_wait", &qvar::WaitStats::var_wait)
      .def_readonly("second_moment_given_wait", &qvar::WaitStats::second_moment_given_wait)
      .def_readonly("frac_waiting", &qvar::WaitStats::frac_waiting)
      .def_readonly("mean_service", &qvar::WaitStats::mean_service)
      .def_readonly("mean_sojourn", &qvar::WaitStats::mean_sojourn)
      .def_readonly("time_avg_in_system", &qvar::WaitStats::time_avg_in_system)
      .def_readonly("arrival_rate", &qvar::WaitStats::arrival_rate)
      .def_readonly("se_mean_wait", &qvar::WaitStats::se_mean_wait)
      .def_readonly("se_var_wait", &qvar::WaitStats::se_var_wait)
      .def("to_dict", [](const qvar::WaitStats& s) { return ToPython(qvar::ToJson(s)); });

  m.def("run_simulation",
        [](double lambda, double mu, const std::string& discipline, std::uint64_t arrivals,
           std::uint64_t seed, const std::string& arrival_dist,
           const std::string& service_dist, const std::string& coupling) {
          const auto cfg = MakeConfig(lambda, mu, discipline, arrivals, seed, arrival_dist,
                                      service_dist, coupling);
          py::gil_scoped_release release;
          return qvar::RunSimulation(cfg);
        },
        py::arg("lambda_"), py::arg("mu"), py::arg("discipline") = "fcfs",
        py::arg("arrivals") = 100000, py::arg("seed") = 0,
        py::arg("arrival_dist") = "exponential", py::arg("service_dist") = "exponential",
        py::arg("coupling") = "position");
  m.def("compute_stats", &qvar::ComputeStats, py::arg("trace"),
        py::arg("warmup_fraction") = qvar::kDefaultWarmupFraction,
        py::arg("batches") = qvar::kDefaultBatches);
  m.def("extract_busy_periods", [](const qvar::SimTrace& t) {
    py::list out;
    for (auto& e : qvar::ExtractBusyPeriods(t)) {
      out.append(py::make_tuple(e.busy_period, e.realized.OneBased()));
    }
    return out;
  });

  m.def("mm1_predict", [](double lambda, double mu) {
    return ToPython(qvar::ToJson(qvar::Mm1Predict(lambda, mu)));
  });
  m.def("consistency_check", [](double lambda, double mu) {
    return qvar::ConsistencyCheck(qvar::Mm1Predict(lambda, mu)).ok;
  });
  m.def("little_check", [](const qvar::WaitStats& s, double lambda_effective) {
    const auto r = qvar::LittleCheck(s, lambda_effective);
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["relative_gap"] = r.relative_gap;
    return d;
  });
  m.def("compare_disciplines",
        [](double lambda, double mu, const std::vector<std::uint64_t>& seeds,
           std::uint64_t arrivals, const std::string& arrival_dist,
           const std::string& service_dist, bool oracle, double warmup) {
          const auto cfg = MakeConfig(lambda, mu, "fcfs", arrivals, 0, arrival_dist,
                                      service_dist, "position");
          qvar::CompareOptions opts;
          opts.attach_oracle = oracle;
          opts.warmup_fraction = warmup;
          qvar::Comparison cmp;
          {
            py::gil_scoped_release release;
            cmp = qvar::CompareDisciplines(cfg, seeds, opts);
          }
          return ToPython(qvar::ToJson(cmp));
        },
        py::arg("lambda_"), py::arg("mu"), py::arg("seeds"), py::arg("arrivals") = 100000,
        py::arg("arrival_dist") = "exponential", py::arg("service_dist") = "exponential",
        py::arg("oracle") = false, py::arg("warmup") = qvar::kDefaultWarmupFraction);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = qvar::cli::Run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
