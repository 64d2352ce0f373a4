// Python bindings. Schedules cross the boundary as JSON text; the package
// __init__ turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmwsched/harness.hpp"
#include "mmwsched/schedule_io.hpp"
#include "mmwsched/waterfill.hpp"

namespace py = pybind11;
using namespace mmw;

namespace {

py::dict record_dict(const RunRecord& r) {
  py::dict d;
  d["seed"] = r.key.seed;
  d["policy"] = std::string(to_string(r.key.policy));
  d["beamwidth_deg"] = r.key.beamwidth_deg;
  d["flow_count"] = r.key.flow_count;
  d["draw"] = r.key.draw;
  d["throughput_bps"] = r.metrics.network_throughput_bps;
  d["consumed_slots"] = r.metrics.consumed_slots;
  d["concurrency_gain"] = r.metrics.concurrency_gain;
  d["jain_index"] = r.metrics.jain_index;
  d["per_flow_throughput"] = r.metrics.per_flow_throughput;
  d["waterfill_bps"] = r.waterfill_bound_bps;
  d["superframes_used"] = r.superframes_used;
  return d;
}

std::vector<HopTransmission> to_hops(const std::vector<std::vector<int>>& rows) {
  std::vector<HopTransmission> hops;
  for (const auto& r : rows) {
    if (r.size() != 5) throw ConfigError("hop rows are [flow, hop, tx, rx, slots]");
    hops.push_back({r[0], r[1], r[2], r[3], r[4], 0.0});
  }
  return hops;
}

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point> pts;
  for (auto [x, y] : xy) pts.push_back({x, y});
  return pts;
}

}  // namespace

PYBIND11_MODULE(_mmwsched, m) {
  m.doc() = "mmWave WPAN concurrent transmission scheduling";

  py::register_exception<InvariantViolation>(m, "InvariantViolation");

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_static(
          "parse",
          [](const std::string& text) {
            std::istringstream in(text);
            return parse_config(in);
          },
          py::arg("text"))
      .def("set", &SimConfig::set, py::arg("key"), py::arg("value"))
      .def("validate", &SimConfig::validate)
      .def_readwrite("node_count", &SimConfig::node_count)
      .def_readwrite("beamwidths_deg", &SimConfig::beamwidths_deg)
      .def_readwrite("path_loss_exponent", &SimConfig::path_loss_exponent)
      .def_readwrite("flow_counts", &SimConfig::flow_counts)
      .def_readwrite("seeds", &SimConfig::seeds)
      .def_readwrite("maxslots", &SimConfig::maxslots)
      .def_readwrite("superframes_per_run", &SimConfig::superframes_per_run)
      .def_readwrite("threads", &SimConfig::threads);

  m.def(
      "run_scenario",
      [](const SimConfig& c, std::uint64_t seed, const std::string& policy,
         double beamwidth_deg, int flow_count) {
        return record_dict(
            run_scenario(c, ScenarioKey{seed, parse_policy(policy), beamwidth_deg, flow_count, 0}));
      },
      py::arg("config"), py::arg("seed"), py::arg("policy"), py::arg("beamwidth_deg"),
      py::arg("flow_count"));

  m.def(
      "run_sweep",
      [](const SimConfig& c, const std::vector<std::string>& names) {
        std::vector<Policy> policies;
        for (const auto& n : names) policies.push_back(parse_policy(n));
        std::vector<RunRecord> recs;
        {
          py::gil_scoped_release release;
          recs = run_sweep(c, policies);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("config"), py::arg("policies") = std::vector<std::string>{"mhct", "emhct-f", "emhct-e"});

  m.def(
      "schedule_json",
      [](const std::string& policy, const std::vector<std::pair<double, double>>& nodes,
         const std::vector<std::vector<int>>& hops, double beamwidth_deg, int maxslots) {
        const ConflictOracle o(to_points(nodes), AntennaConfig::from_beamwidth_deg(beamwidth_deg));
        const auto ordered = sort_hops(to_hops(hops), {});
        const auto s = schedule_hops(parse_policy(policy), ordered, o, maxslots);
        const auto issues = validate_schedule(s, o);
        if (!issues.empty()) throw InvariantViolation(issues.front());
        return schedule_to_json(s).dump();
      },
      py::arg("policy"), py::arg("nodes"), py::arg("hops"), py::arg("beamwidth_deg"),
      py::arg("maxslots"));

  m.def(
      "brute_force_optimum",
      [](const std::vector<std::pair<double, double>>& nodes,
         const std::vector<std::vector<int>>& hops, double beamwidth_deg) {
        const ConflictOracle o(to_points(nodes), AntennaConfig::from_beamwidth_deg(beamwidth_deg));
        return brute_force_optimum(sort_hops(to_hops(hops), {}), o);
      },
      py::arg("nodes"), py::arg("hops"), py::arg("beamwidth_deg"));

  m.def(
      "render_gantt_json",
      [](const std::string& doc, int width) {
        return render_gantt(schedule_from_json(nlohmann::json::parse(doc)), width);
      },
      py::arg("schedule"), py::arg("width") = 80);

  m.def(
      "solve_waterfill",
      [](const std::vector<double>& gains, double budget) {
        const auto s = solve_waterfill({gains, budget});
        return py::make_tuple(s.allocations, s.water_level);
      },
      py::arg("gains"), py::arg("budget"));

  m.def(
      "jain_index",
      [](const std::vector<double>& v) { return jain_index(v); }, py::arg("values"));

  m.def("csv_header", &csv_header);
}
