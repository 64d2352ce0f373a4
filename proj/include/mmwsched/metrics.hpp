#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mmwsched/scheduler.hpp"

namespace mmw {

struct MetricsReport {
  double network_throughput_bps = 0.0;
  int consumed_slots = 0;
  std::optional<double> concurrency_gain;
  std::optional<double> jain_index;
  std::vector<double> per_flow_throughput;  ///< by flow id order
};

/// Payload of every flow whose final hop (into its destination) is placed
/// in `schedule`. `flows` must carry their planned hop_path.
double delivered_bits(const ScheduleMap& schedule,
                      std::span<const FlowRequest> flows);

/// End-to-end bits delivered in this superframe per second of superframe.
double network_throughput(const ScheduleMap& schedule,
                          std::span<const FlowRequest> flows,
                          double superframe_duration_s);

int slot_consumption(const ScheduleMap& schedule);

/// Direct-link slots credited to the work placed in `schedule`: each flow
/// contributes direct_slots times the fraction of its hop slots placed.
double credited_direct_slots(const ScheduleMap& schedule,
                             std::span<const FlowRequest> flows);

/// credited_direct_slots / consumed slots; empty when nothing is placed.
std::optional<double> concurrency_gain(const ScheduleMap& schedule,
                                       std::span<const FlowRequest> flows);

/// (sum x)^2 / (n sum x^2); empty when no value is positive.
std::optional<double> jain_index(std::span<const double> values);

/// Accumulates the superframes of one run into a MetricsReport.
///
/// Time is measured in occupied channel time: the slots each superframe's
/// schedule consumes, laid end to end. Run throughput is delivered bits
/// over that time; a flow's throughput is its payload over the time at
/// which its final hop ends (zero if it never arrives).
class RunTally {
 public:
  RunTally(std::span<const FlowRequest> flows, double slot_duration_s);

  void add(const SuperframeOutcome& outcome);

  MetricsReport report() const;

  /// Per-flow concurrency gain n_d / n_c, where n_c is the flow's
  /// payload-proportional share of the consumed slots. Only for delivered
  /// flows; keyed by flow id.
  std::map<int, double> flow_gains() const;

  /// Flows as planned in the first superframe (source to destination).
  const std::vector<FlowRequest>& initial_plans() const { return initial_plans_; }

  int superframes() const { return superframes_; }
  double delivered_bits() const { return delivered_; }

 private:
  struct FlowStats {
    double payload = 0.0;
    int direct_slots = 0;
    std::optional<double> finish_slot;
  };

  double slot_duration_s_;
  std::map<int, FlowStats> flows_;
  std::vector<FlowRequest> initial_plans_;
  long long consumed_ = 0;
  double credited_ = 0.0;
  double delivered_ = 0.0;
  int superframes_ = 0;
};

}  // namespace mmw
