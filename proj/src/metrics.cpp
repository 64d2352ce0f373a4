#include "mmwsched/metrics.hpp"

#include <numeric>

namespace mmw {

namespace {

bool reaches_destination(const ScheduleMap& schedule, const FlowRequest& flow) {
  const int last = static_cast<int>(flow.hop_path.size()) - 1;
  if (last < 1) return false;
  const Placement* p = schedule.find(flow.id, last);
  return p != nullptr && p->hop.rx == flow.destination;
}

}  // namespace

double delivered_bits(const ScheduleMap& schedule,
                      std::span<const FlowRequest> flows) {
  double bits = 0.0;
  for (const auto& flow : flows)
    if (reaches_destination(schedule, flow)) bits += flow.payload_bits;
  return bits;
}

double network_throughput(const ScheduleMap& schedule,
                          std::span<const FlowRequest> flows,
                          double superframe_duration_s) {
  return delivered_bits(schedule, flows) / superframe_duration_s;
}

int slot_consumption(const ScheduleMap& schedule) {
  int total = 0;
  for (const auto& g : schedule.groups) total += g.size_slots;
  return total;
}

double credited_direct_slots(const ScheduleMap& schedule,
                             std::span<const FlowRequest> flows) {
  double credit = 0.0;
  for (const auto& flow : flows) {
    const int total = std::accumulate(flow.hop_slots.begin(), flow.hop_slots.end(), 0);
    if (total == 0) continue;
    int placed = 0;
    for (std::size_t k = 0; k < flow.hop_slots.size(); ++k)
      if (schedule.find(flow.id, static_cast<int>(k) + 1)) placed += flow.hop_slots[k];
    credit += flow.direct_slots * static_cast<double>(placed) / total;
  }
  return credit;
}

std::optional<double> concurrency_gain(const ScheduleMap& schedule,
                                       std::span<const FlowRequest> flows) {
  const int consumed = slot_consumption(schedule);
  if (consumed == 0) return std::nullopt;
  return credited_direct_slots(schedule, flows) / consumed;
}

std::optional<double> jain_index(std::span<const double> values) {
  double sum = 0.0, squares = 0.0;
  for (double v : values) {
    sum += v;
    squares += v * v;
  }
  if (values.empty() || !(squares > 0.0)) return std::nullopt;
  return sum * sum / (static_cast<double>(values.size()) * squares);
}

RunTally::RunTally(std::span<const FlowRequest> flows, double slot_duration_s)
    : slot_duration_s_(slot_duration_s) {
  for (const auto& f : flows) flows_[f.id].payload = f.payload_bits;
}

void RunTally::add(const SuperframeOutcome& outcome) {
  const ScheduleMap& schedule = outcome.schedule;
  if (superframes_ == 0) {
    initial_plans_ = outcome.planned;
    for (const auto& f : outcome.planned) flows_[f.id].direct_slots = f.direct_slots;
  }
  for (const auto& flow : outcome.planned) {
    if (!reaches_destination(schedule, flow)) continue;
    const Placement* last =
        schedule.find(flow.id, static_cast<int>(flow.hop_path.size()) - 1);
    int group_start = 0;
    for (const auto& g : schedule.groups)
      for (const auto& p : g.placements)
        if (&p == last) group_start = g.start_slot;
    flows_[flow.id].finish_slot =
        static_cast<double>(consumed_) + group_start + last->end();
  }
  delivered_ += mmw::delivered_bits(schedule, outcome.planned);
  credited_ += credited_direct_slots(schedule, outcome.planned);
  consumed_ += slot_consumption(schedule);
  ++superframes_;
}

MetricsReport RunTally::report() const {
  MetricsReport r;
  r.consumed_slots = static_cast<int>(consumed_);
  if (consumed_ > 0) {
    r.network_throughput_bps = delivered_ / (consumed_ * slot_duration_s_);
    r.concurrency_gain = credited_ / static_cast<double>(consumed_);
  }
  for (const auto& [id, stats] : flows_) {
    r.per_flow_throughput.push_back(
        stats.finish_slot ? stats.payload / (*stats.finish_slot * slot_duration_s_)
                          : 0.0);
  }
  r.jain_index = jain_index(r.per_flow_throughput);
  return r;
}

std::map<int, double> RunTally::flow_gains() const {
  std::map<int, double> gains;
  double payload = 0.0;
  for (const auto& [id, stats] : flows_)
    if (stats.finish_slot) payload += stats.payload;
  if (payload <= 0.0 || consumed_ == 0) return gains;
  for (const auto& [id, stats] : flows_) {
    if (!stats.finish_slot) continue;
    const double share = static_cast<double>(consumed_) * stats.payload / payload;
    gains[id] = stats.direct_slots / share;
  }
  return gains;
}

}  // namespace mmw
