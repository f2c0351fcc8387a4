// pybind11 module exposing the main operations: state construction, the
// measurement primitives, the exact outcome oracle, experiment execution,
// and the validation suite. Reports cross the boundary as plain Python
// dicts built from their JSON form.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "sqss/analysis.hpp"
#include "sqss/claims.hpp"
#include "sqss/report_io.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      py::dict d;
      for (const auto& [key, value] : j.items()) {
        d[py::str(key)] = json_to_py(value);
      }
      return d;
    }
    case nlohmann::json::value_t::array: {
      py::list l;
      for (const auto& value : j) l.append(json_to_py(value));
      return l;
    }
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    default:
      return py::none();
  }
}

// Step descriptions come in as tuples: ("z", slot), ("bell", a, b), ("joint",).
std::vector<sqss::MeasureStep> parse_plan(const py::sequence& steps) {
  std::vector<sqss::MeasureStep> plan;
  for (const auto& raw : steps) {
    const py::sequence step = raw.cast<py::sequence>();
    if (py::len(step) == 0) throw std::invalid_argument("empty measurement step");
    const std::string kind = step[0].cast<std::string>();
    if (kind == "z") {
      plan.push_back(sqss::ZStep{step[1].cast<int>()});
    } else if (kind == "bell") {
      plan.push_back(sqss::BellStep{step[1].cast<int>(), step[2].cast<int>()});
    } else if (kind == "joint") {
      plan.push_back(sqss::JointStep{});
    } else {
      throw std::invalid_argument("unknown measurement step: " + kind);
    }
  }
  return plan;
}

sqss::Protocol parse_protocol(const std::string& name) {
  if (name == "measure-resend") return sqss::Protocol::MeasureResend;
  if (name == "randomization" || name == "randomization-based") {
    return sqss::Protocol::RandomizationBased;
  }
  throw std::invalid_argument("unknown protocol: " + name);
}

sqss::AdversaryKind parse_adversary(const std::string& name) {
  if (name == "none") return sqss::AdversaryKind::None;
  if (name == "intercept-resend") return sqss::AdversaryKind::InterceptResend;
  if (name == "trojan-horse") return sqss::AdversaryKind::TrojanHorse;
  throw std::invalid_argument("unknown adversary: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semi-quantum secret sharing simulator";
  m.attr("__version__") = "0.1.0";

  py::class_<sqss::RandomSource>(m, "RandomSource")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_property_readonly("seed", &sqss::RandomSource::seed)
      .def("uniform01", &sqss::RandomSource::uniform01)
      .def("bit", &sqss::RandomSource::bit)
      .def("fork", &sqss::RandomSource::fork, py::arg("tag"));

  py::class_<sqss::StateVector3>(m, "StateVector3")
      .def(py::init<>())
      .def_readonly("amplitudes", &sqss::StateVector3::amplitudes)
      .def("norm_sq", &sqss::StateVector3::norm_sq)
      .def("is_normalized", &sqss::StateVector3::is_normalized,
           py::arg("tol") = sqss::kAmplitudeTolerance);

  py::class_<sqss::TripletRegister>(m, "TripletRegister")
      .def(py::init<>())
      .def(py::init<int>(), py::arg("id"))
      .def_readwrite("state", &sqss::TripletRegister::state)
      .def("collapsed", &sqss::TripletRegister::collapsed, py::arg("slot"))
      .def("recorded_outcome", &sqss::TripletRegister::recorded_outcome,
           py::arg("slot"));

  m.def("make_ghz_like", &sqss::make_ghz_like,
        "The shared resource state (|000>+|011>+|110>+|101>)/2");
  m.def("make_ghz", &sqss::make_ghz);
  m.def("apply_hadamard", &sqss::apply_hadamard, py::arg("state"), py::arg("slot"));

  m.def("measure_z", &sqss::measure_z, py::arg("register"), py::arg("slot"),
        py::arg("rng"));
  m.def(
      "measure_bell",
      [](sqss::TripletRegister& reg, int a, int b, sqss::RandomSource& rng) {
        return std::string(sqss::to_string(sqss::measure_bell(reg, a, b, rng)));
      },
      py::arg("register"), py::arg("slot_a"), py::arg("slot_b"), py::arg("rng"));
  m.def("measure_joint", &sqss::measure_joint, py::arg("register"), py::arg("rng"));

  m.def(
      "outcome_distribution",
      [](const sqss::StateVector3& state, const py::sequence& steps) {
        const auto plan = parse_plan(steps);
        const sqss::Distribution dist = sqss::outcome_distribution(state, plan);
        py::dict out;
        for (const auto& [tuple, prob] : dist) {
          out[py::str(sqss::outcome_label(plan, tuple))] = prob;
        }
        return out;
      },
      py::arg("state"), py::arg("plan"),
      "Exact outcome distribution of a measurement plan, e.g. "
      "[(\"z\", 2), (\"bell\", 1, 3)] or [(\"joint\",)]");

  m.def(
      "run_experiment",
      [](const std::string& protocol, int n_triplets, int runs,
         std::uint64_t seed, const std::string& adversary, int allowed_case3,
         int delay_spies_per_slot, bool solution1, double significance,
         bool solution2, double multi_photon_threshold, double error_threshold,
         double share_probability, bool trace) {
        sqss::ExperimentPlan plan;
        plan.protocol = parse_protocol(protocol);
        plan.adversary.kind = parse_adversary(adversary);
        plan.adversary.allowed_case3 = allowed_case3;
        plan.adversary.delay_spies_per_slot = delay_spies_per_slot;
        plan.config.n_triplets = n_triplets;
        plan.config.share_probability = share_probability;
        plan.config.error_threshold = error_threshold;
        plan.config.solution1.enabled = solution1;
        plan.config.solution1.significance = significance;
        plan.config.solution2.enabled = solution2;
        plan.config.solution2.multi_photon_threshold = multi_photon_threshold;
        plan.config.trace = trace;
        plan.runs = runs;
        plan.seed = seed;
        sqss::AggregateReport report = sqss::run_experiment(plan);
        sqss::verify_claims(report);
        return json_to_py(sqss::aggregate_report_json(report));
      },
      py::arg("protocol") = "randomization-based", py::arg("n_triplets") = 1000,
      py::arg("runs") = 100, py::arg("seed") = 42,
      py::arg("adversary") = "none", py::arg("allowed_case3") = 0,
      py::arg("delay_spies_per_slot") = 1, py::arg("solution1") = false,
      py::arg("significance") = 1e-3, py::arg("solution2") = false,
      py::arg("multi_photon_threshold") = 0.01,
      py::arg("error_threshold") = 0.0, py::arg("share_probability") = 0.5,
      py::arg("trace") = false,
      "Execute a batch of protocol runs and return the aggregate report");

  m.def(
      "run_claim_suite",
      [](std::uint64_t seed) {
        return json_to_py(sqss::checklist_json(sqss::run_claim_suite(seed)));
      },
      py::arg("seed") = 42,
      "Run the quantitative validation suite and return the checklist");
}
