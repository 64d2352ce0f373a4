// mmwsim: command-line front end for the concurrent-transmission schedulers.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mmwsched/harness.hpp"
#include "mmwsched/schedule_io.hpp"

namespace {

using namespace mmw;
using nlohmann::json;

enum ExitCode { kOk = 0, kConfigError = 1, kInvariant = 2 };

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policies;
  std::optional<double> beamwidth;
  std::optional<int> flows;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> sets;
};

SimConfig resolve(const CommonFlags& f) {
  SimConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seeds = {*f.seed};
  if (f.beamwidth) cfg.beamwidths_deg = {*f.beamwidth};
  if (f.flows) cfg.flow_counts = {*f.flows};
  cfg.validate();
  return cfg;
}

std::vector<Policy> resolve_policies(const CommonFlags& f) {
  if (f.policies.empty()) return {std::begin(kAllPolicies), std::end(kAllPolicies)};
  std::vector<Policy> out;
  for (const auto& p : f.policies) out.push_back(parse_policy(p));
  return out;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key = value configuration file");
  cmd->add_option("--seed", f.seed, "topology/flow seed");
  cmd->add_option("--policy", f.policies, "mhct, emhct-f or emhct-e (repeatable)");
  cmd->add_option("--beamwidth", f.beamwidth, "antenna beamwidth in degrees");
  cmd->add_option("--flows", f.flows, "number of active flows");
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--set", f.sets, "override any configuration key (key=value)");
}

json record_json(const RunRecord& r) {
  json j = {{"seed", r.key.seed},
            {"policy", std::string(to_string(r.key.policy))},
            {"beamwidth_deg", r.key.beamwidth_deg},
            {"flow_count", r.key.flow_count},
            {"throughput_bps", r.metrics.network_throughput_bps},
            {"consumed_slots", r.metrics.consumed_slots},
            {"concurrency_gain", nullptr},
            {"jain_index", nullptr},
            {"superframes_used", r.superframes_used},
            {"per_flow_throughput_bps", r.metrics.per_flow_throughput}};
  if (r.metrics.concurrency_gain) j["concurrency_gain"] = *r.metrics.concurrency_gain;
  if (r.metrics.jain_index) j["jain_index"] = *r.metrics.jain_index;
  if (r.waterfill_bound_bps) j["waterfill_bound_bps"] = *r.waterfill_bound_bps;
  return j;
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records,
                   const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    out << arr.dump(2) << '\n';
    return;
  }
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

int cmd_run(const CommonFlags& f) {
  const SimConfig cfg = resolve(f);
  std::vector<RunRecord> records;
  for (Policy p : resolve_policies(f))
    records.push_back(run_scenario(cfg, ScenarioKey{cfg.seeds.front(), p,
                                                    cfg.beamwidths_deg.front(),
                                                    cfg.flow_counts.front(), 0}));
  if (f.out.empty()) {
    write_records(std::cout, records, f.format);
  } else {
    std::filesystem::create_directories(f.out);
    std::ofstream out(std::filesystem::path(f.out) / ("run." + f.format), std::ios::binary);
    write_records(out, records, f.format);
  }
  return kOk;
}

int cmd_sweep(const CommonFlags& f) {
  const SimConfig cfg = resolve(f);
  const auto policies = resolve_policies(f);
  const auto records = run_sweep(cfg, policies);
  if (f.out.empty()) {
    write_records(std::cout, records, f.format);
    return kOk;
  }
  for (const auto& path : emit_plot_data(records, f.out))
    std::cerr << "wrote " << path.string() << '\n';
  return kOk;
}

// Fixture: {"beamwidth_deg": 45, "nodes": [[x, y], ...],
//           "hops": [{"flow": 0, "hop": 1, "tx": 0, "rx": 1, "slots": 3}, ...]}
int cmd_oracle(const std::string& fixture, const std::string& format) {
  std::ifstream in(fixture);
  if (!in) throw ConfigError("cannot open fixture " + fixture);
  json doc;
  std::vector<Point> nodes;
  std::vector<HopTransmission> hops;
  double beamwidth = 0.0;
  try {
    doc = json::parse(in);
    beamwidth = doc.at("beamwidth_deg").get<double>();
    for (const auto& n : doc.at("nodes"))
      nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    for (const auto& h : doc.at("hops")) {
      HopTransmission t;
      t.flow_id = h.at("flow").get<int>();
      t.hop_index = h.value("hop", 1);
      t.tx = h.at("tx").get<int>();
      t.rx = h.at("rx").get<int>();
      t.slots = h.at("slots").get<int>();
      if (t.tx < 0 || t.rx < 0 || t.tx >= static_cast<int>(nodes.size()) ||
          t.rx >= static_cast<int>(nodes.size()) || t.tx == t.rx || t.slots < 1)
        throw ConfigError("fixture hop references an invalid link");
      hops.push_back(t);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fixture: ") + e.what());
  }
  const int maxslots = doc.value("maxslots", 1000000);
  const ConflictOracle oracle(nodes, AntennaConfig::from_beamwidth_deg(beamwidth));
  const auto ordered = sort_hops(hops, {});

  json result = json::object();
  std::optional<int> optimum;
  if (hops.size() <= kBruteForceMaxHops) optimum = brute_force_optimum(hops, oracle);
  bool ok = true;
  for (Policy p : kAllPolicies) {
    const ScheduleMap s = schedule_hops(p, ordered, oracle, maxslots);
    if (const auto issues = validate_schedule(s, oracle); !issues.empty())
      throw InvariantViolation(std::string(to_string(p)) + ": " + issues.front());
    // only a complete schedule is comparable with the optimum
    if (optimum && s.placement_count() == hops.size() && s.consumed_slots < *optimum)
      ok = false;
    result[std::string(to_string(p))] = schedule_to_json(s);
  }
  if (format == "json") {
    json out = {{"optimum", optimum ? json(*optimum) : json(nullptr)}, {"schedules", result}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "policy,consumed_slots,optimum\n";
    for (Policy p : kAllPolicies)
      std::cout << to_string(p) << ','
                << result[std::string(to_string(p))]["consumed_slots"].get<int>() << ','
                << (optimum ? std::to_string(*optimum) : std::string()) << '\n';
  }
  if (!ok) throw InvariantViolation("a heuristic beat the exhaustive optimum");
  return kOk;
}

int cmd_render(const std::string& path, int width) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schedule " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  std::cout << render_gantt(schedule_from_json(doc), width);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave WPAN concurrent transmission scheduling simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags;
  auto* run = app.add_subcommand("run", "run one scenario");
  add_common(run, run_flags);
  run->add_option("--out", run_flags.out, "directory for run.<format>");

  auto* sweep = app.add_subcommand("sweep", "run the full experiment grid");
  add_common(sweep, sweep_flags);
  sweep->add_option("--out", sweep_flags.out, "directory for plot CSVs");

  std::string fixture, oracle_format = "csv";
  auto* oracle = app.add_subcommand("oracle", "compare heuristics to the exhaustive optimum");
  oracle->add_option("fixture", fixture, "fixture JSON")->required();
  oracle->add_option("--format", oracle_format)->check(CLI::IsMember({"csv", "json"}));

  std::string schedule_path;
  int width = 80;
  auto* render = app.add_subcommand("render", "text Gantt chart of a schedule JSON");
  render->add_option("schedule", schedule_path, "schedule JSON")->required();
  render->add_option("--width", width, "chart columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*oracle) return cmd_oracle(fixture, oracle_format);
    if (*render) return cmd_render(schedule_path, width);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}
