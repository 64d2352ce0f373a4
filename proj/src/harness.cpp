#include "mmwsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "mmwsched/rng.hpp"
#include "mmwsched/waterfill.hpp"

namespace mmw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// "1..5, 8" -> 1 2 3 4 5 8
std::vector<long long> parse_int_list(const std::string& key,
                                      const std::string& text) {
  std::vector<long long> out;
  for (const auto& item : split_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(key, item));
      continue;
    }
    const long long lo = parse_int(key, trim(item.substr(0, dots)));
    const long long hi = parse_int(key, trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigError(key + ": empty range '" + item + "'");
    for (long long v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

std::string fmt_beamwidth(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

}  // namespace

SimConfig::SimConfig() {
  flow_counts.resize(50);
  std::iota(flow_counts.begin(), flow_counts.end(), 1);
  seeds.resize(10);
  std::iota(seeds.begin(), seeds.end(), 1);
}

void SimConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string(name) + ": must be positive");
  };
  if (node_count < 2) throw ConfigError("node_count: must be at least 2");
  positive(room.width, "room_width");
  positive(room.height, "room_height");
  if (beamwidths_deg.empty()) throw ConfigError("beamwidths: must not be empty");
  for (double bw : beamwidths_deg) {
    try {
      antennas_for_beamwidth(bw);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("beamwidths: ") + e.what());
    }
  }
  positive(bandwidth_hz, "bandwidth_hz");
  positive(tx_power_w, "tx_power_w");
  positive(carrier_hz, "carrier_hz");
  positive(slot_duration_s, "slot_duration_s");
  positive(payload_min_bits, "payload_min_bits");
  if (!(payload_max_bits >= payload_min_bits))
    throw ConfigError("payload_max_bits: must be at least payload_min_bits");
  if (!(path_loss_exponent >= 2.0 && path_loss_exponent <= 6.0))
    throw ConfigError("path_loss_exponent: must lie in [2, 6]");
  if (flow_counts.empty()) throw ConfigError("flow_counts: must not be empty");
  const long long max_pairs = static_cast<long long>(node_count) * (node_count - 1);
  for (int n : flow_counts)
    if (n < 1 || n > max_pairs)
      throw ConfigError("flow_counts: each entry must lie in [1, node_count*(node_count-1)]");
  if (seeds.empty()) throw ConfigError("seeds: must not be empty");
  if (payload_draws < 1) throw ConfigError("payload_draws: must be at least 1");
  if (maxslots < 1) throw ConfigError("maxslots: must be positive");
  if (superframes_per_run < 1) throw ConfigError("superframes_per_run: must be positive");
  if (threads < 0) throw ConfigError("threads: must not be negative");
}

RadioParams SimConfig::radio() const {
  RadioParams r;
  r.bandwidth_hz = bandwidth_hz;
  r.tx_power_w = tx_power_w;
  r.noise_density_w_per_hz = dbm_per_mhz_to_w_per_hz(noise_density_dbm_per_mhz);
  r.path_loss_exponent = path_loss_exponent;
  r.wavelength_m = kSpeedOfLight / carrier_hz;
  r.slot_duration_s = slot_duration_s;
  return r;
}

AntennaConfig SimConfig::antenna(double beamwidth_deg) const {
  return AntennaConfig::from_beamwidth_deg(beamwidth_deg, antenna_gain_dbi);
}

void SimConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  auto as_int = [&] { return static_cast<int>(parse_int(key, value)); };
  auto as_double = [&] { return parse_double(key, value); };
  if (key == "node_count") node_count = as_int();
  else if (key == "room_width") room.width = as_double();
  else if (key == "room_height") room.height = as_double();
  else if (key == "beamwidths" || key == "beamwidth_deg") {
    beamwidths_deg.clear();
    for (const auto& item : split_list(value))
      beamwidths_deg.push_back(parse_double(key, item));
  } else if (key == "bandwidth_hz") bandwidth_hz = as_double();
  else if (key == "tx_power_w") tx_power_w = as_double();
  else if (key == "antenna_gain_dbi") antenna_gain_dbi = as_double();
  else if (key == "noise_density_dbm_per_mhz") noise_density_dbm_per_mhz = as_double();
  else if (key == "path_loss_exponent") path_loss_exponent = as_double();
  else if (key == "carrier_hz") carrier_hz = as_double();
  else if (key == "payload_min_bits") payload_min_bits = as_double();
  else if (key == "payload_max_bits") payload_max_bits = as_double();
  else if (key == "flow_counts") {
    flow_counts.clear();
    for (long long v : parse_int_list(key, value)) flow_counts.push_back(static_cast<int>(v));
  } else if (key == "seeds") {
    seeds.clear();
    for (long long v : parse_int_list(key, value)) {
      if (v < 0) throw ConfigError("seeds: must not be negative");
      seeds.push_back(static_cast<std::uint64_t>(v));
    }
  } else if (key == "payload_draws") payload_draws = as_int();
  else if (key == "maxslots") maxslots = as_int();
  else if (key == "slot_duration_s") slot_duration_s = as_double();
  else if (key == "superframes_per_run") superframes_per_run = as_int();
  else if (key == "threads") threads = as_int();
  else throw ConfigError("unknown configuration key '" + key + "'");
}

SimConfig parse_config(std::istream& in, SimConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, std::move(base));
}

std::vector<FlowRequest> generate_flows(const SimConfig& config,
                                        std::uint64_t seed, int flow_count,
                                        int draw) {
  const int n = config.node_count;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (NodeId s = 0; s < n; ++s)
    for (NodeId d = 0; d < n; ++d)
      if (s != d) pairs.emplace_back(s, d);
  if (flow_count < 1 || static_cast<std::size_t>(flow_count) > pairs.size())
    throw ConfigError("flow_count: out of range for node_count");

  RandomStream pick(seed, "flows", {static_cast<std::uint64_t>(flow_count)});
  RandomStream size(seed, "payload",
                    {static_cast<std::uint64_t>(flow_count),
                     static_cast<std::uint64_t>(draw)});
  std::vector<FlowRequest> flows;
  for (int i = 0; i < flow_count; ++i) {
    const std::size_t j = i + pick.below(pairs.size() - i);
    std::swap(pairs[i], pairs[j]);
    FlowRequest f;
    f.id = i;
    f.source = pairs[i].first;
    f.destination = pairs[i].second;
    f.payload_bits =
        std::round(size.uniform(config.payload_min_bits, config.payload_max_bits));
    flows.push_back(std::move(f));
  }
  return flows;
}

RunRecord run_scenario(const SimConfig& config, const ScenarioKey& key) {
  config.validate();
  RunRecord record;
  record.config = config;
  record.key = key;

  const RadioParams radio = config.radio();
  const AntennaConfig antenna = config.antenna(key.beamwidth_deg);
  SchedulingContext ctx(generate_topology(config.node_count, config.room, key.seed),
                        radio, antenna, config.maxslots);
  auto flows = generate_flows(config, key.seed, key.flow_count, key.draw);
  RunTally tally(flows, radio.slot_duration_s);

  double elapsed_ms = 0.0;
  for (int sf = 0; sf < config.superframes_per_run && !flows.empty(); ++sf) {
    const auto t0 = std::chrono::steady_clock::now();
    auto outcome = schedule_superframe(std::move(flows), key.policy, ctx);
    elapsed_ms += std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (const auto issues = validate_schedule(outcome.schedule, ctx.oracle);
        !issues.empty()) {
      throw InvariantViolation("seed " + std::to_string(key.seed) + " policy " +
                               std::string(to_string(key.policy)) + " superframe " +
                               std::to_string(sf) + ": " + issues.front());
    }
    tally.add(outcome);
    flows = std::move(outcome.carryover);
  }
  record.metrics = tally.report();
  record.superframes_used = tally.superframes();
  record.wall_time_ms = elapsed_ms;

  if (key.policy == Policy::kEmhctF) {
    const auto gains = tally.flow_gains();
    std::vector<FlowRequest> delivered;
    std::vector<double> hop_gains;
    for (const auto& plan : tally.initial_plans()) {
      const auto it = gains.find(plan.id);
      if (it == gains.end()) continue;
      delivered.push_back(plan);
      hop_gains.insert(hop_gains.end(), plan.hop_slots.size(), it->second);
    }
    if (!delivered.empty()) {
      const double bits = bound_throughput(delivered, hop_gains, ctx.topology, radio,
                                           antenna, config.maxslots);
      record.waterfill_bound_bps = bits / config.superframe_duration_s();
    }
  }
  return record;
}

RunRecord run_scenario(const SimConfig& config, std::uint64_t seed,
                       Policy policy) {
  config.validate();
  return run_scenario(config, ScenarioKey{seed, policy, config.beamwidths_deg.front(),
                                          config.flow_counts.front(), 0});
}

std::vector<RunRecord> run_sweep(const SimConfig& config,
                                 std::span<const Policy> policies) {
  config.validate();
  std::vector<ScenarioKey> keys;
  for (double bw : config.beamwidths_deg)
    for (int flows : config.flow_counts)
      for (std::uint64_t seed : config.seeds)
        for (int draw = 0; draw < config.payload_draws; ++draw)
          for (Policy p : policies) keys.push_back({seed, p, bw, flows, draw});

  std::vector<RunRecord> records(keys.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        records[i] = run_scenario(config, keys[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = keys.size();
      }
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, keys.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<SummaryRow> summarize(std::span<const RunRecord> records) {
  struct Acc {
    int runs = 0;
    double throughput = 0.0, consumed = 0.0;
    double rho = 0.0, jain = 0.0, water = 0.0;
    int rho_n = 0, jain_n = 0, water_n = 0;
  };
  std::map<std::tuple<int, double, int>, Acc> groups;
  for (const auto& r : records) {
    Acc& a = groups[{static_cast<int>(r.key.policy), r.key.beamwidth_deg, r.key.flow_count}];
    ++a.runs;
    a.throughput += r.metrics.network_throughput_bps;
    a.consumed += r.metrics.consumed_slots;
    if (r.metrics.concurrency_gain) a.rho += *r.metrics.concurrency_gain, ++a.rho_n;
    if (r.metrics.jain_index) a.jain += *r.metrics.jain_index, ++a.jain_n;
    if (r.waterfill_bound_bps) a.water += *r.waterfill_bound_bps, ++a.water_n;
  }
  std::vector<SummaryRow> rows;
  for (const auto& [k, a] : groups) {
    SummaryRow row;
    row.policy = static_cast<Policy>(std::get<0>(k));
    row.beamwidth_deg = std::get<1>(k);
    row.flow_count = std::get<2>(k);
    row.runs = a.runs;
    row.throughput_bps = a.throughput / a.runs;
    row.consumed_slots = a.consumed / a.runs;
    if (a.rho_n) row.concurrency_gain = a.rho / a.rho_n;
    if (a.jain_n) row.jain_index = a.jain / a.jain_n;
    if (a.water_n) row.waterfill_bps = a.water / a.water_n;
    rows.push_back(row);
  }
  return rows;
}

std::string csv_header() {
  return "seed,policy,beamwidth_deg,flow_count,throughput_bps,consumed_slots,"
         "concurrency_gain,jain_index";
}

std::string csv_row(const RunRecord& r) {
  std::string row = std::to_string(r.key.seed) + "," + std::string(to_string(r.key.policy)) +
                    "," + fmt_beamwidth(r.key.beamwidth_deg) + "," +
                    std::to_string(r.key.flow_count) + "," +
                    fmt_double(r.metrics.network_throughput_bps) + "," +
                    std::to_string(r.metrics.consumed_slots) + "," +
                    fmt_optional(r.metrics.concurrency_gain) + "," +
                    fmt_optional(r.metrics.jain_index);
  return row;
}

std::vector<std::filesystem::path> emit_plot_data(
    std::span<const RunRecord> records, const std::filesystem::path& out_dir,
    std::optional<double> reference_beamwidth_deg) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& name) {
    written.push_back(out_dir / name);
    std::ofstream out(written.back(), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + written.back().string());
    return out;
  };

  {
    auto out = open("runs.csv");
    out << csv_header() << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
  }
  const auto rows = summarize(records);
  {
    auto out = open("summary.csv");
    out << "policy,beamwidth_deg,flow_count,runs,throughput_bps,consumed_slots,"
           "concurrency_gain,jain_index,waterfill_bps\n";
    for (const auto& s : rows)
      out << to_string(s.policy) << ',' << fmt_beamwidth(s.beamwidth_deg) << ','
          << s.flow_count << ',' << s.runs << ',' << fmt_double(s.throughput_bps) << ','
          << fmt_double(s.consumed_slots) << ',' << fmt_optional(s.concurrency_gain)
          << ',' << fmt_optional(s.jain_index) << ',' << fmt_optional(s.waterfill_bps)
          << '\n';
  }
  if (records.empty()) return written;

  std::set<double> beamwidths;
  std::set<int> flow_counts;
  for (const auto& s : rows) {
    beamwidths.insert(s.beamwidth_deg);
    flow_counts.insert(s.flow_count);
  }
  const double reference = reference_beamwidth_deg.value_or(*beamwidths.begin());
  auto cell = [&](Policy p, double bw, int n) -> const SummaryRow* {
    for (const auto& s : rows)
      if (s.policy == p && s.beamwidth_deg == bw && s.flow_count == n) return &s;
    return nullptr;
  };
  using Getter = std::optional<double> (*)(const SummaryRow&);
  auto family = [&](const std::string& name, double bw, const std::string& suffix,
                    Getter get, bool with_waterfill) {
    auto out = open(name);
    out << "flow_count,mhct_" << suffix << ",emhct_f_" << suffix << ",emhct_e_" << suffix;
    if (with_waterfill) out << ",waterfill_bps";
    out << '\n';
    for (int n : flow_counts) {
      out << n;
      for (Policy p : kAllPolicies) {
        const SummaryRow* s = cell(p, bw, n);
        out << ',' << (s ? fmt_optional(get(*s)) : std::string());
      }
      if (with_waterfill) {
        const SummaryRow* s = cell(Policy::kEmhctF, bw, n);
        out << ',' << (s ? fmt_optional(s->waterfill_bps) : std::string());
      }
      out << '\n';
    }
  };
  const Getter throughput = [](const SummaryRow& s) -> std::optional<double> {
    return s.throughput_bps;
  };
  for (double bw : beamwidths)
    family("throughput_bw" + fmt_beamwidth(bw) + ".csv", bw, "bps", throughput, false);
  family("throughput_waterfill.csv", reference, "bps", throughput, true);
  family("concurrency_gain.csv", reference, "rho",
         [](const SummaryRow& s) { return s.concurrency_gain; }, false);
  family("fairness.csv", reference, "jain",
         [](const SummaryRow& s) { return s.jain_index; }, false);
  return written;
}

int brute_force_optimum(std::span<const HopTransmission> hops,
                        const ConflictOracle& oracle) {
  if (hops.size() > kBruteForceMaxHops)
    throw std::length_error("brute_force_optimum: at most 6 hops supported");
  const std::size_t n = hops.size();
  if (n == 0) return 0;

  std::vector<int> pred(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (hops[b].flow_id == hops[a].flow_id && hops[b].hop_index == hops[a].hop_index - 1)
        pred[a] = static_cast<int>(b);
  std::vector<std::vector<bool>> clash(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      clash[a][b] = a != b && oracle.conflicts(hops[a], hops[b]);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = std::numeric_limits<int>::max();
  std::vector<int> start(n), end(n);
  std::vector<bool> done(n);
  do {
    std::fill(done.begin(), done.end(), false);
    int makespan = 0;
    bool feasible = true;
    for (int h : order) {
      if (pred[h] >= 0 && !done[pred[h]]) {
        feasible = false;
        break;
      }
      int t = pred[h] >= 0 ? end[pred[h]] : 0;
      for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t o = 0; o < n; ++o) {
          if (!done[o] || !clash[h][o]) continue;
          if (start[o] < t + hops[h].slots && t < end[o]) {
            t = end[o];
            moved = true;
          }
        }
      }
      start[h] = t;
      end[h] = t + hops[h].slots;
      done[h] = true;
      makespan = std::max(makespan, end[h]);
      if (makespan >= best) {
        feasible = false;
        break;
      }
    }
    if (feasible) best = makespan;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace mmw
