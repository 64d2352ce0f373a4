#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmwsched/radio_model.hpp"
#include "mmwsched/topology.hpp"

namespace mmw {

enum class Policy { kMhct, kEmhctF, kEmhctE };

std::string_view to_string(Policy policy);

/// Accepts `mhct`, `emhct-f`, `emhct-e` (case-insensitive, `_` for `-`).
Policy parse_policy(std::string_view name);

inline constexpr Policy kAllPolicies[] = {Policy::kMhct, Policy::kEmhctF,
                                          Policy::kEmhctE};

struct Placement {
  HopTransmission hop;
  int offset = 0;  ///< slots from the start of the owning group

  int end() const { return offset + hop.slots; }
};

struct Group {
  int index = 0;
  int size_slots = 0;
  int start_slot = 0;
  std::vector<Placement> placements;
};

/// Ordered groups tiling the transmission period of one superframe.
struct ScheduleMap {
  std::vector<Group> groups;
  int maxslots = 0;
  int consumed_slots = 0;

  const Placement* find(int flow_id, int hop_index) const;
  std::size_t placement_count() const;
};

/// Per-flow aging state. `priority` is the multiplier applied to the
/// slot-count sort key.
struct PriorityState {
  double priority = 1.0;
  int miss_count = 0;
};

using PriorityTable = std::map<int, PriorityState>;

/// Misses after which a flow is sorted ahead of every less-starved flow.
inline constexpr int kStarvationMisses = 4;
inline constexpr double kAgingStep = 0.25;

/// Sort key slots * (1 + 0.25 * misses).
double effective_priority(int slots, int miss_count);

/// Orders hops for scheduling: flows with at least four misses first, then
/// by effective priority descending, then (flow id, hop index) ascending.
/// Writes the effective priority into each hop.
std::vector<HopTransmission> sort_hops(std::vector<HopTransmission> hops,
                                       const PriorityTable& priorities);

ScheduleMap mhct_schedule(std::span<const HopTransmission> ordered,
                          const ConflictOracle& oracle, int maxslots);
ScheduleMap emhct_f_schedule(std::span<const HopTransmission> ordered,
                             const ConflictOracle& oracle, int maxslots);
ScheduleMap emhct_e_schedule(std::span<const HopTransmission> ordered,
                             const ConflictOracle& oracle, int maxslots);
ScheduleMap schedule_hops(Policy policy,
                          std::span<const HopTransmission> ordered,
                          const ConflictOracle& oracle, int maxslots);

/// Increments the miss counter of every flow in `missed` and resets all
/// other flows in `state`.
void age_priorities(PriorityTable& state, const std::set<int>& missed);

struct SchedulingContext {
  Topology topology;
  RadioParams radio;
  AntennaConfig antenna;
  ConflictOracle oracle;
  int maxslots = 1000;
  PriorityTable priorities;

  SchedulingContext(Topology topo, RadioParams radio_params,
                    AntennaConfig antenna_cfg, int max_slots);
};

struct SuperframeOutcome {
  ScheduleMap schedule;
  /// Flows as planned this superframe (hop_path/hop_slots filled in).
  std::vector<FlowRequest> planned;
  /// Ids of flows whose final hop completed in this superframe.
  std::vector<int> completed;
  /// Residual requests, starting at the node holding the data.
  std::vector<FlowRequest> carryover;
};

/// Plans paths, orders hops, runs `policy` and ages the priorities of
/// flows that did not finish.
SuperframeOutcome schedule_superframe(std::vector<FlowRequest> flows,
                                      Policy policy, SchedulingContext& ctx);

/// Returns a description of every invariant the schedule breaks (empty when
/// valid): conflicting overlap, hop order, budget and group tiling/sizing.
std::vector<std::string> validate_schedule(const ScheduleMap& schedule,
                                           const ConflictOracle& oracle);

}  // namespace mmw
