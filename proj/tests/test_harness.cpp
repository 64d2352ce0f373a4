#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mmwsched/harness.hpp"
#include "mmwsched/schedule_io.hpp"
#include "oracles.hpp"

using namespace mmw;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

SimConfig small() {
  SimConfig c;
  c.flow_counts = {3, 12};
  c.seeds = {1, 2};
  c.beamwidths_deg = {20, 90};
  return c;
}

}  // namespace

TEST_CASE("config defaults") {
  const SimConfig c;
  CHECK(c.flow_counts.size() == 50);
  CHECK(c.flow_counts.front() == 1);
  CHECK(c.flow_counts.back() == 50);
  CHECK(c.seeds.size() == 10);
  CHECK(c.superframe_duration_s() == doctest::Approx(0.065536));
  CHECK_NOTHROW(c.validate());
  CHECK(c.radio().noise_density_w_per_hz == doctest::Approx(3.981071705534973e-23));
  CHECK(c.antenna(45).beam_count == 8);
}

TEST_CASE("config parsing") {
  std::istringstream in(R"(# comment
node_count = 12
beamwidths = 45, 90   # trailing comment
flow_counts = 1..3, 10
seeds = 7
maxslots=500
payload_draws = 2
)");
  const auto c = parse_config(in);
  CHECK(c.node_count == 12);
  CHECK(c.beamwidths_deg == std::vector<double>{45, 90});
  CHECK(c.flow_counts == std::vector<int>{1, 2, 3, 10});
  CHECK(c.seeds == std::vector<std::uint64_t>{7});
  CHECK(c.maxslots == 500);
  CHECK(c.payload_draws == 2);

  auto err = [](const std::string& text) -> std::string {
    std::istringstream s(text);
    try {
      parse_config(s).validate();
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(err("bogus = 1").find("bogus") != std::string::npos);
  CHECK(err("maxslots = ten").find("maxslots") != std::string::npos);
  CHECK(err("beamwidths = 50").find("beamwidths") != std::string::npos);
  CHECK(err("tx_power_w = -1").find("tx_power_w") != std::string::npos);
  CHECK(err("flow_counts = 5..2").find("flow_counts") != std::string::npos);
  CHECK(err("flow_counts = ").find("flow_counts") != std::string::npos);
  CHECK(err("path_loss_exponent = 9").find("path_loss_exponent") != std::string::npos);
  CHECK(err("payload_max_bits = 1").find("payload_max_bits") != std::string::npos);
  CHECK(err("no equals sign").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg"), ConfigError);
}

TEST_CASE("flow generation") {
  const SimConfig c;
  const auto a = generate_flows(c, 3, 50);
  const auto b = generate_flows(c, 3, 50);
  REQUIRE(a.size() == 50);
  std::set<std::pair<int, int>> pairs;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].id == static_cast<int>(k));
    CHECK(a[k].source != a[k].destination);
    CHECK(a[k].payload_bits >= 50e6);
    CHECK(a[k].payload_bits <= 350e6);
    CHECK(a[k].payload_bits == std::round(a[k].payload_bits));
    CHECK(a[k].source == b[k].source);
    CHECK(a[k].payload_bits == b[k].payload_bits);
    pairs.insert({a[k].source, a[k].destination});
  }
  CHECK(pairs.size() == 50);
  const auto redraw = generate_flows(c, 3, 50, 1);
  CHECK(redraw[0].source == a[0].source);
  CHECK(redraw[0].payload_bits != a[0].payload_bits);

  SimConfig two;
  two.node_count = 2;
  CHECK(generate_flows(two, 1, 2).size() == 2);
  CHECK_THROWS_AS(generate_flows(two, 1, 3), ConfigError);
}

TEST_CASE("run scenario") {
  SimConfig c;
  c.flow_counts = {20};
  c.beamwidths_deg = {45};
  const auto a = run_scenario(c, 5, Policy::kEmhctE);
  const auto b = run_scenario(c, 5, Policy::kEmhctE);
  CHECK(a.metrics.network_throughput_bps == b.metrics.network_throughput_bps);
  CHECK(a.metrics.consumed_slots == b.metrics.consumed_slots);
  CHECK(a.metrics.per_flow_throughput == b.metrics.per_flow_throughput);
  CHECK_FALSE(a.waterfill_bound_bps.has_value());

  SimConfig two;
  two.node_count = 2;
  two.flow_counts = {1};
  for (Policy p : kAllPolicies) {
    const auto r = run_scenario(two, 1, p);
    CHECK(*r.metrics.concurrency_gain == doctest::Approx(1.0));
    CHECK(*r.metrics.jain_index == doctest::Approx(1.0));
  }

  SimConfig dense;
  dense.flow_counts = {50};
  dense.beamwidths_deg = {20};
  const auto m = run_scenario(dense, 1, Policy::kMhct);
  const auto f = run_scenario(dense, 1, Policy::kEmhctF);
  CHECK(f.metrics.network_throughput_bps >= m.metrics.network_throughput_bps);
  REQUIRE(f.waterfill_bound_bps.has_value());
  CHECK(*f.waterfill_bound_bps >= f.metrics.network_throughput_bps);

  SimConfig bad;
  bad.maxslots = 0;
  CHECK_THROWS_AS(run_scenario(bad, 1, Policy::kMhct), ConfigError);
}

TEST_CASE("sweep shape and order") {
  auto c = small();
  const auto recs = run_sweep(c, kAllPolicies);
  CHECK(recs.size() == 2 * 2 * 2 * 3);
  CHECK(recs[0].key.beamwidth_deg == 20);
  CHECK(recs[0].key.flow_count == 3);
  CHECK(recs[1].key.policy == Policy::kEmhctF);
  CHECK(recs[3].key.seed == 2);
  CHECK(summarize(recs).size() == 3 * 2 * 2);

  c.threads = 1;
  const auto serial = run_sweep(c, kAllPolicies);
  c.threads = 4;
  const auto parallel = run_sweep(c, kAllPolicies);
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CHECK(csv_row(serial[k]) == csv_row(parallel[k]));
    CHECK(csv_row(serial[k]) == csv_row(recs[k]));
  }
  CHECK(run_sweep(c, std::span<const Policy>{}).empty());
}

TEST_CASE("csv rows") {
  CHECK(csv_header() ==
        "seed,policy,beamwidth_deg,flow_count,throughput_bps,consumed_slots,"
        "concurrency_gain,jain_index");
  RunRecord r;
  r.key = {4, Policy::kEmhctF, 45, 7, 0};
  r.metrics.network_throughput_bps = 1.5e10;
  r.metrics.consumed_slots = 321;
  r.metrics.concurrency_gain = 2.5;
  CHECK(csv_row(r) == "4,emhct-f,45,7,1.5e+10,321,2.5,");
}

TEST_CASE("plot data files") {
  const auto recs = run_sweep(small(), kAllPolicies);
  const auto dir = std::filesystem::temp_directory_path() / "mmwsched_plot_a";
  const auto dir2 = std::filesystem::temp_directory_path() / "mmwsched_plot_b";
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
  const auto files = emit_plot_data(recs, dir);
  emit_plot_data(run_sweep(small(), kAllPolicies), dir2);
  std::set<std::string> names;
  for (const auto& f : files) {
    names.insert(f.filename().string());
    CHECK(slurp(f) == slurp(dir2 / f.filename()));
    CHECK(slurp(f).find('\r') == std::string::npos);
  }
  for (const char* want : {"runs.csv", "summary.csv", "throughput_bw20.csv", "throughput_bw90.csv",
                           "throughput_waterfill.csv", "concurrency_gain.csv", "fairness.csv"})
    CHECK(names.count(want) == 1);

  std::istringstream rho(slurp(dir / "concurrency_gain.csv"));
  std::string line;
  std::getline(rho, line);
  CHECK(line == "flow_count,mhct_rho,emhct_f_rho,emhct_e_rho");
  int rows = 0;
  while (std::getline(rho, line)) ++rows;
  CHECK(rows == 2);
  std::getline(std::istringstream(slurp(dir / "throughput_waterfill.csv")) >> std::ws, line);
  CHECK(line.find("waterfill_bps") != std::string::npos);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("brute force optimum") {
  const ConflictOracle star({{0, 0}, {5, 0}, {0, 5}, {5, 5}}, AntennaConfig::from_beamwidth_deg(20));
  const std::vector<HopTransmission> clique{{0, 1, 0, 1, 2, 0}, {1, 1, 0, 2, 3, 0}, {2, 1, 0, 3, 4, 0}};
  CHECK(brute_force_optimum(clique, star) == 9);

  std::vector<Point> pts;
  for (int k = 0; k < 3; ++k) {
    pts.push_back({0, 5.0 * k});
    pts.push_back({2, 5.0 * k});
  }
  const ConflictOracle free(pts, AntennaConfig::from_beamwidth_deg(20));
  const std::vector<HopTransmission> apart{{0, 1, 0, 1, 2, 0}, {1, 1, 2, 3, 3, 0}, {2, 1, 4, 5, 4, 0}};
  CHECK(brute_force_optimum(apart, free) == 4);

  const std::vector<HopTransmission> seven(7, HopTransmission{0, 1, 0, 1, 1, 0});
  CHECK_THROWS_AS(brute_force_optimum(seven, star), std::length_error);
  CHECK(brute_force_optimum(std::vector<HopTransmission>{}, star) == 0);

  // against a search over raw start times on tiny instances
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 16.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Point> p;
    for (int k = 0; k < 6; ++k) p.push_back({u(rng), u(rng)});
    const double bw = trial % 2 ? 90 : 180;
    std::vector<HopTransmission> hs;
    const int n = 2 + trial % 3;
    for (int k = 0; k < n; ++k) {
      const NodeId tx = static_cast<NodeId>(rng() % 6);
      hs.push_back({k, 1, tx, static_cast<NodeId>((tx + 1 + rng() % 5) % 6),
                    1 + static_cast<int>(rng() % 3), 0});
    }
    if (n == 4) {  // make the last two one flow
      hs[3].flow_id = hs[2].flow_id;
      hs[3].hop_index = 2;
      hs[3].tx = hs[2].rx;
      if (hs[3].rx == hs[3].tx) hs[3].rx = (hs[3].tx + 1) % 6;
    }
    const ConflictOracle o(p, AntennaConfig::from_beamwidth_deg(bw));
    auto clash = [&](int a, int b) { return oracle::conflict(p, hs[a], hs[b], bw); };
    CHECK(brute_force_optimum(hs, o) == oracle::optimum_by_start_times(hs, clash));
  }
}

TEST_CASE("schedule json and gantt") {
  SimConfig c;
  const RadioParams radio = c.radio();
  const auto ant = c.antenna(45);
  SchedulingContext ctx(generate_topology(30, c.room, 2), radio, ant, 1000);
  const auto out = schedule_superframe(generate_flows(c, 2, 10), Policy::kEmhctE, ctx);
  const auto doc = schedule_to_json(out.schedule);
  CHECK(doc.at("groups").size() == out.schedule.groups.size());
  CHECK(doc.at("groups")[0].at("placements")[0].contains("offset"));
  const auto back = schedule_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(schedule_to_json(back) == doc);
  CHECK(validate_schedule(back, ctx.oracle).empty());

  const auto chart = render_gantt(out.schedule, 60);
  CHECK(chart.find('#') != std::string::npos);
  std::istringstream lines(chart);
  std::string line;
  std::getline(lines, line);
  std::size_t width = 0;
  CHECK(std::count(chart.begin(), chart.end(), '\n') ==
        static_cast<long>(out.schedule.groups.size()) + 1);
  while (std::getline(lines, line)) {
    const auto bar = line.rfind('|');
    if (width == 0) width = bar;
    CHECK(bar == width);
    CHECK(line.find(" f") != std::string::npos);
  }
  CHECK_THROWS_AS(schedule_from_json(nlohmann::json::parse(R"({"groups": 3})")), ConfigError);
}
