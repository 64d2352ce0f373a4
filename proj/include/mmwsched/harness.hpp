#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwsched/metrics.hpp"
#include "mmwsched/scheduler.hpp"

namespace mmw {

/// A schedule broke one of its invariants; indicates a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SimConfig {
  int node_count = 30;
  Room room{16.0, 16.0};
  std::vector<double> beamwidths_deg{20.0, 45.0, 90.0, 180.0};
  double bandwidth_hz = 7e9;
  double tx_power_w = 1e-4;
  double antenna_gain_dbi = 12.0;
  double noise_density_dbm_per_mhz = -134.0;
  double path_loss_exponent = 3.0;
  double carrier_hz = 60e9;
  double payload_min_bits = 50e6;
  double payload_max_bits = 350e6;
  std::vector<int> flow_counts;  ///< defaults to 1..50
  std::vector<std::uint64_t> seeds;  ///< defaults to 1..10
  int payload_draws = 1;
  int maxslots = 1000;
  double slot_duration_s = 65.536e-6;
  int superframes_per_run = 20;
  int threads = 0;  ///< 0 = hardware concurrency

  SimConfig();

  /// Throws ConfigError naming the offending field.
  void validate() const;

  RadioParams radio() const;
  AntennaConfig antenna(double beamwidth_deg) const;
  double superframe_duration_s() const { return maxslots * slot_duration_s; }

  /// Sets one field from its textual form, e.g. ("flow_counts", "1..50").
  void set(const std::string& key, const std::string& value);
};

/// Flat `key = value` file; `#` starts a comment. Unknown keys are errors.
SimConfig parse_config(std::istream& in, SimConfig base = {});
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

struct ScenarioKey {
  std::uint64_t seed = 1;
  Policy policy = Policy::kMhct;
  double beamwidth_deg = 20.0;
  int flow_count = 1;
  int draw = 0;
};

struct RunRecord {
  SimConfig config;
  ScenarioKey key;
  MetricsReport metrics;
  std::optional<double> waterfill_bound_bps;  ///< EMHCT-F runs only
  int superframes_used = 0;
  double wall_time_ms = 0.0;  ///< time spent inside the scheduler
};

/// Random distinct (source, destination) pairs with uniform payloads.
std::vector<FlowRequest> generate_flows(const SimConfig& config,
                                        std::uint64_t seed, int flow_count,
                                        int draw = 0);

RunRecord run_scenario(const SimConfig& config, const ScenarioKey& key);

/// Uses the first configured beamwidth and flow count.
RunRecord run_scenario(const SimConfig& config, std::uint64_t seed,
                       Policy policy);

/// Every (beamwidth, flow count, seed, draw, policy) combination, in that
/// nesting order regardless of how many worker threads run it.
std::vector<RunRecord> run_sweep(const SimConfig& config,
                                 std::span<const Policy> policies);

struct SummaryRow {
  Policy policy = Policy::kMhct;
  double beamwidth_deg = 0.0;
  int flow_count = 0;
  int runs = 0;
  double throughput_bps = 0.0;
  double consumed_slots = 0.0;
  std::optional<double> concurrency_gain;
  std::optional<double> jain_index;
  std::optional<double> waterfill_bps;
};

/// Means grouped by (policy, beamwidth, flow count), sorted by that key.
std::vector<SummaryRow> summarize(std::span<const RunRecord> records);

std::string csv_header();
std::string csv_row(const RunRecord& record);

/// Writes runs.csv, summary.csv, throughput_bw<deg>.csv per beamwidth,
/// throughput_waterfill.csv, concurrency_gain.csv and fairness.csv.
/// The last three use `reference_beamwidth_deg`, or the smallest beamwidth
/// present. Returns the files written.
std::vector<std::filesystem::path> emit_plot_data(
    std::span<const RunRecord> records, const std::filesystem::path& out_dir,
    std::optional<double> reference_beamwidth_deg = std::nullopt);

inline constexpr std::size_t kBruteForceMaxHops = 6;

/// Exact minimum schedule length for at most six hops: every precedence-
/// respecting order is list-scheduled at the earliest conflict-free slot.
int brute_force_optimum(std::span<const HopTransmission> hops,
                        const ConflictOracle& oracle);

}  // namespace mmw
