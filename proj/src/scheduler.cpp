#include "mmwsched/scheduler.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <utility>

namespace mmw {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::kMhct:
      return "mhct";
    case Policy::kEmhctF:
      return "emhct-f";
    case Policy::kEmhctE:
      return "emhct-e";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  std::string norm;
  for (char c : name)
    norm.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(c)));
  if (norm == "mhct") return Policy::kMhct;
  if (norm == "emhct-f") return Policy::kEmhctF;
  if (norm == "emhct-e") return Policy::kEmhctE;
  throw ConfigError("unknown policy '" + std::string(name) +
                    "' (expected mhct, emhct-f or emhct-e)");
}

const Placement* ScheduleMap::find(int flow_id, int hop_index) const {
  for (const auto& g : groups)
    for (const auto& p : g.placements)
      if (p.hop.flow_id == flow_id && p.hop.hop_index == hop_index) return &p;
  return nullptr;
}

std::size_t ScheduleMap::placement_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.placements.size();
  return n;
}

double effective_priority(int slots, int miss_count) {
  return slots * (1.0 + kAgingStep * miss_count);
}

std::vector<HopTransmission> sort_hops(std::vector<HopTransmission> hops,
                                       const PriorityTable& priorities) {
  auto misses = [&](int flow) {
    const auto it = priorities.find(flow);
    return it == priorities.end() ? 0 : it->second.miss_count;
  };
  for (auto& h : hops) h.priority = effective_priority(h.slots, misses(h.flow_id));
  std::stable_sort(hops.begin(), hops.end(),
                   [&](const HopTransmission& a, const HopTransmission& b) {
                     const bool sa = misses(a.flow_id) >= kStarvationMisses;
                     const bool sb = misses(b.flow_id) >= kStarvationMisses;
                     if (sa != sb) return sa;
                     if (a.priority != b.priority) return a.priority > b.priority;
                     if (a.flow_id != b.flow_id) return a.flow_id < b.flow_id;
                     return a.hop_index < b.hop_index;
                   });
  return hops;
}

namespace {

enum class Mode { kGroupOnly, kFixedSpan, kExpandableSpan };

// Working state for one scheduling run. Hops are addressed by their
// position in the priority-ordered input.
class GroupBuilder {
 public:
  GroupBuilder(std::span<const HopTransmission> ordered,
               const ConflictOracle& oracle, int maxslots)
      : hops_(ordered.begin(), ordered.end()),
        conflict_(hops_.size()),
        pred_(hops_.size(), -1),
        group_of_(hops_.size(), -1),
        offset_(hops_.size(), 0),
        maxslots_(maxslots) {
    std::map<std::pair<int, int>, int> index;
    for (std::size_t h = 0; h < hops_.size(); ++h)
      index[{hops_[h].flow_id, hops_[h].hop_index}] = static_cast<int>(h);
    for (std::size_t h = 0; h < hops_.size(); ++h) {
      const auto it = index.find({hops_[h].flow_id, hops_[h].hop_index - 1});
      if (it != index.end()) pred_[h] = it->second;
    }
    if (!hops_.empty()) conflict_ = build_conflict_graph(hops_, oracle);
  }

  void run(Mode mode) {
    grouping_pass();
    if (mode == Mode::kGroupOnly) return;
    const bool expandable = mode == Mode::kExpandableSpan;
    for (;;) {
      bool changed = span_overlap_pass(expandable);
      changed = grouping_pass() || changed;
      if (!changed) break;
    }
  }

  ScheduleMap result() const {
    ScheduleMap out;
    out.maxslots = maxslots_;
    int start = 0;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      Group group;
      group.index = static_cast<int>(g);
      group.size_slots = groups_[g].size;
      group.start_slot = start;
      std::vector<int> members = groups_[g].members;
      std::stable_sort(members.begin(), members.end(),
                       [&](int a, int b) { return offset_[a] < offset_[b]; });
      for (int h : members) group.placements.push_back({hops_[h], offset_[h]});
      start += group.size_slots;
      out.groups.push_back(std::move(group));
    }
    out.consumed_slots = start;
    return out;
  }

 private:
  struct Slot {
    int size = 0;
    std::vector<int> members;
  };

  int slots(int h) const { return hops_[h].slots; }
  bool placed(int h) const { return group_of_[h] >= 0; }
  int hop_count() const { return static_cast<int>(hops_.size()); }

  // Charged by each group's widest member, not its nominal capacity.
  int remaining_budget() const {
    int used = 0;
    for (int g = 0; g < static_cast<int>(groups_.size()); ++g) used += fitted_size(g);
    return maxslots_ - used;
  }

  bool conflicts_with_group(int h, int g) const {
    for (int m : groups_[g].members)
      if (conflict_(h, m)) return true;
    return false;
  }

  void add(int h, int g, int offset) {
    group_of_[h] = g;
    offset_[h] = offset;
    groups_[g].members.push_back(h);
  }

  int fitted_size(int g, int without = -1) const {
    int size = 0;
    for (int m : groups_[g].members)
      if (m != without) size = std::max(size, offset_[m] + slots(m));
    return size;
  }

  void remove(int h) {
    const int g = group_of_[h];
    auto& members = groups_[g].members;
    members.erase(std::find(members.begin(), members.end(), h));
    group_of_[h] = -1;
    groups_[g].size = fitted_size(g);
    if (members.empty()) {
      groups_.erase(groups_.begin() + g);
      for (int& owner : group_of_)
        if (owner > g) --owner;
    }
  }

  void shrink_to_fit() {
    for (std::size_t g = 0; g < groups_.size(); ++g)
      groups_[g].size = fitted_size(static_cast<int>(g));
  }

  // First-fit grouping: each eligible hop goes at offset 0 into the first
  // group after its predecessor's that holds no conflicting hop and is large
  // enough; otherwise a new group is opened, sized for the largest unplaced
  // hop that still fits the budget.
  bool grouping_pass() {
    bool any = false;
    for (bool progress = true; progress;) {
      progress = false;
      for (int h = 0; h < hop_count(); ++h) {
        if (placed(h)) continue;
        const int p = pred_[h];
        if (p >= 0 && !placed(p)) continue;
        const int first = p >= 0 ? group_of_[p] + 1 : 0;
        bool done = false;
        for (int g = first; g < static_cast<int>(groups_.size()); ++g) {
          if (groups_[g].size >= slots(h) && !conflicts_with_group(h, g) &&
              slots(h) - fitted_size(g) <= remaining_budget()) {
            add(h, g, 0);
            done = true;
            break;
          }
        }
        if (!done) {
          const int budget = remaining_budget();
          if (slots(h) <= budget) {
            int capacity = slots(h);
            for (int u = 0; u < hop_count(); ++u)
              if (!placed(u) && slots(u) <= budget)
                capacity = std::max(capacity, slots(u));
            groups_.push_back({capacity, {}});
            add(h, static_cast<int>(groups_.size()) - 1, 0);
            done = true;
          }
        }
        progress = progress || done;
      }
      any = any || progress;
    }
    shrink_to_fit();
    return any;
  }

  // Packs unplaced and later-group hops into earlier groups, behind the
  // latest-ending conflicting member. Fixed groups only accept a hop that
  // ends within the current size; expandable groups may grow by spending
  // free superframe budget on an unplaced hop, or by at most the slots a
  // moved hop frees in its old group.
  bool span_overlap_pass(bool expandable) {
    bool changed = false;
    for (int target = 0; target < static_cast<int>(groups_.size()); ++target) {
      for (int h = 0; h < hop_count(); ++h) {
        const int source = group_of_[h];
        if (source >= 0 && source <= target) continue;
        const int p = pred_[h];
        if (p >= 0 && (!placed(p) || group_of_[p] > target)) continue;

        int start = 0;
        for (int m : groups_[target].members)
          if (conflict_(h, m) || m == p) start = std::max(start, offset_[m] + slots(m));
        const int end = start + slots(h);
        const int growth = std::max(0, end - groups_[target].size);
        bool accept = growth == 0;
        if (!accept && expandable) {
          if (source < 0)
            accept = growth <= remaining_budget();
          else
            accept = growth <= groups_[source].size - fitted_size(source, h);
        }
        if (!accept) continue;

        if (source >= 0) remove(h);
        add(h, target, start);
        groups_[target].size = std::max(groups_[target].size, end);
        changed = true;
      }
    }
    return changed;
  }

  std::vector<HopTransmission> hops_;
  ConflictGraph conflict_;
  std::vector<int> pred_;
  std::vector<int> group_of_;
  std::vector<int> offset_;
  std::vector<Slot> groups_;
  int maxslots_;
};

ScheduleMap build(std::span<const HopTransmission> ordered,
                  const ConflictOracle& oracle, int maxslots, Mode mode) {
  if (maxslots <= 0) throw ConfigError("maxslots must be positive");
  GroupBuilder builder(ordered, oracle, maxslots);
  builder.run(mode);
  return builder.result();
}

}  // namespace

ScheduleMap mhct_schedule(std::span<const HopTransmission> ordered,
                          const ConflictOracle& oracle, int maxslots) {
  return build(ordered, oracle, maxslots, Mode::kGroupOnly);
}

ScheduleMap emhct_f_schedule(std::span<const HopTransmission> ordered,
                             const ConflictOracle& oracle, int maxslots) {
  return build(ordered, oracle, maxslots, Mode::kFixedSpan);
}

ScheduleMap emhct_e_schedule(std::span<const HopTransmission> ordered,
                             const ConflictOracle& oracle, int maxslots) {
  return build(ordered, oracle, maxslots, Mode::kExpandableSpan);
}

ScheduleMap schedule_hops(Policy policy,
                          std::span<const HopTransmission> ordered,
                          const ConflictOracle& oracle, int maxslots) {
  switch (policy) {
    case Policy::kMhct:
      return mhct_schedule(ordered, oracle, maxslots);
    case Policy::kEmhctF:
      return emhct_f_schedule(ordered, oracle, maxslots);
    case Policy::kEmhctE:
      return emhct_e_schedule(ordered, oracle, maxslots);
  }
  return {};
}

void age_priorities(PriorityTable& state, const std::set<int>& missed) {
  for (int flow : missed) state.try_emplace(flow);
  for (auto& [flow, entry] : state) {
    entry.miss_count = missed.count(flow) ? entry.miss_count + 1 : 0;
    entry.priority = 1.0 + kAgingStep * entry.miss_count;
  }
}

SchedulingContext::SchedulingContext(Topology topo, RadioParams radio_params,
                                     AntennaConfig antenna_cfg, int max_slots)
    : topology(std::move(topo)),
      radio(radio_params),
      antenna(antenna_cfg),
      oracle(topology.positions(), antenna),
      maxslots(max_slots) {
  if (maxslots <= 0) throw ConfigError("maxslots must be positive");
}

SuperframeOutcome schedule_superframe(std::vector<FlowRequest> flows,
                                      Policy policy, SchedulingContext& ctx) {
  for (auto& node : ctx.topology.nodes) node.workload = 0;

  std::vector<HopTransmission> hops;
  for (auto& flow : flows) {
    auto path = convert_to_multihop(flow, ctx.topology, ctx.radio, ctx.antenna);
    flow.direct_slots = direct_slots_for(flow, ctx.topology, ctx.radio, ctx.antenna);
    flow.hop_path = {flow.source};
    flow.hop_slots.clear();
    for (const auto& h : path) {
      flow.hop_path.push_back(h.rx);
      flow.hop_slots.push_back(h.slots);
      ctx.topology.node(h.tx).workload += h.slots;
      ctx.topology.node(h.rx).workload += h.slots;
    }
    auto [it, fresh] = ctx.priorities.try_emplace(flow.id);
    if (fresh) {
      it->second.miss_count = flow.miss_count;
      it->second.priority = 1.0 + kAgingStep * flow.miss_count;
    }
    hops.insert(hops.end(), path.begin(), path.end());
  }

  SuperframeOutcome out;
  const auto ordered = sort_hops(std::move(hops), ctx.priorities);
  out.schedule = schedule_hops(policy, ordered, ctx.oracle, ctx.maxslots);

  std::set<int> missed;
  std::vector<std::pair<FlowRequest, NodeId>> pending;
  for (const auto& flow : flows) {
    int done = 0;
    while (done < static_cast<int>(flow.hop_slots.size()) &&
           out.schedule.find(flow.id, done + 1) != nullptr)
      ++done;
    if (done == static_cast<int>(flow.hop_slots.size())) {
      out.completed.push_back(flow.id);
    } else {
      missed.insert(flow.id);
      pending.emplace_back(flow, flow.hop_path[done]);
    }
  }
  age_priorities(ctx.priorities, missed);
  for (int id : out.completed) ctx.priorities.erase(id);

  for (auto& [flow, at] : pending) {
    FlowRequest rest;
    rest.id = flow.id;
    rest.source = at;
    rest.destination = flow.destination;
    rest.payload_bits = flow.payload_bits;
    rest.miss_count = ctx.priorities.at(flow.id).miss_count;
    out.carryover.push_back(std::move(rest));
  }
  out.planned = std::move(flows);
  return out;
}

std::vector<std::string> validate_schedule(const ScheduleMap& schedule,
                                           const ConflictOracle& oracle) {
  std::vector<std::string> issues;
  struct Interval {
    const Placement* p;
    int begin;
    int end;
  };
  std::vector<Interval> all;
  int start = 0;
  for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
    const Group& group = schedule.groups[g];
    const std::string tag = "group " + std::to_string(g);
    if (group.index != static_cast<int>(g)) issues.push_back(tag + ": index mismatch");
    if (group.start_slot != start) issues.push_back(tag + ": does not tile");
    if (group.placements.empty()) issues.push_back(tag + ": empty");
    int widest = 0;
    for (const auto& p : group.placements) {
      if (p.offset < 0 || p.end() > group.size_slots)
        issues.push_back(tag + ": placement outside group");
      widest = std::max(widest, p.end());
      all.push_back({&p, group.start_slot + p.offset, group.start_slot + p.end()});
    }
    if (widest != group.size_slots) issues.push_back(tag + ": size is not tight");
    start += group.size_slots;
  }
  if (start != schedule.consumed_slots)
    issues.push_back("consumed_slots differs from the sum of group sizes");
  if (schedule.consumed_slots > schedule.maxslots)
    issues.push_back("consumed_slots exceeds maxslots");

  for (std::size_t a = 0; a < all.size(); ++a) {
    const HopTransmission& ha = all[a].p->hop;
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      const HopTransmission& hb = all[b].p->hop;
      const bool overlap = all[a].begin < all[b].end && all[b].begin < all[a].end;
      if (overlap && oracle.conflicts(ha, hb))
        issues.push_back("conflicting overlap: flow " + std::to_string(ha.flow_id) +
                         " hop " + std::to_string(ha.hop_index) + " / flow " +
                         std::to_string(hb.flow_id) + " hop " +
                         std::to_string(hb.hop_index));
    }
    if (ha.hop_index > 1) {
      const Interval* prev = nullptr;
      for (const auto& iv : all)
        if (iv.p->hop.flow_id == ha.flow_id && iv.p->hop.hop_index == ha.hop_index - 1)
          prev = &iv;
      if (prev == nullptr || prev->end > all[a].begin)
        issues.push_back("hop order: flow " + std::to_string(ha.flow_id) + " hop " +
                         std::to_string(ha.hop_index));
    }
  }
  return issues;
}

}  // namespace mmw
