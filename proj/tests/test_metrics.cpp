#include <doctest.h>

#include "mmwsched/metrics.hpp"

using namespace mmw;

namespace {

FlowRequest flow(int id, std::vector<NodeId> path, std::vector<int> slots, int direct,
                 double payload) {
  FlowRequest f;
  f.id = id;
  f.source = path.front();
  f.destination = path.back();
  f.hop_path = std::move(path);
  f.hop_slots = std::move(slots);
  f.direct_slots = direct;
  f.payload_bits = payload;
  return f;
}

Group group(int index, int start, int size, std::vector<Placement> ps) {
  return Group{index, size, start, std::move(ps)};
}

}  // namespace

TEST_CASE("jain index") {
  const std::vector<double> v{1, 2, 3};
  CHECK(*jain_index(v) == doctest::Approx(6.0 / 7.0));
  const std::vector<double> eq{4, 4, 4, 4};
  CHECK(*jain_index(eq) == doctest::Approx(1.0));
  const std::vector<double> lone{5, 0, 0, 0};
  CHECK(*jain_index(lone) == doctest::Approx(0.25));
  const std::vector<double> zero{0, 0};
  CHECK_FALSE(jain_index(zero).has_value());
  CHECK_FALSE(jain_index(std::vector<double>{}).has_value());
}

TEST_CASE("delivery, consumption and concurrency gain") {
  // two direct flows side by side in one 10-slot group
  const std::vector<FlowRequest> flows{flow(0, {0, 1}, {10}, 10, 1e6),
                                       flow(1, {2, 3}, {10}, 10, 2e6)};
  ScheduleMap s;
  s.maxslots = 100;
  s.groups.push_back(group(0, 0, 10, {{{0, 1, 0, 1, 10, 0}, 0}, {{1, 1, 2, 3, 10, 0}, 0}}));
  s.consumed_slots = 10;
  CHECK(slot_consumption(s) == 10);
  CHECK(delivered_bits(s, flows) == doctest::Approx(3e6));
  CHECK(*concurrency_gain(s, flows) == doctest::Approx(2.0));
  CHECK(network_throughput(s, flows, 0.5) == doctest::Approx(6e6));

  // serialised clique of direct flows: gain 1
  ScheduleMap serial;
  serial.maxslots = 100;
  serial.groups.push_back(group(0, 0, 10, {{{0, 1, 0, 1, 10, 0}, 0}}));
  serial.groups.push_back(group(1, 10, 10, {{{1, 1, 2, 3, 10, 0}, 0}}));
  serial.consumed_slots = 20;
  CHECK(*concurrency_gain(serial, flows) == doctest::Approx(1.0));

  // half of a two-hop flow: half the direct credit, no delivery
  const std::vector<FlowRequest> relay{flow(0, {0, 1, 2}, {4, 4}, 12, 1e6)};
  ScheduleMap partial;
  partial.maxslots = 100;
  partial.groups.push_back(group(0, 0, 4, {{{0, 1, 0, 1, 4, 0}, 0}}));
  partial.consumed_slots = 4;
  CHECK(credited_direct_slots(partial, relay) == doctest::Approx(6.0));
  CHECK(delivered_bits(partial, relay) == 0.0);

  CHECK_FALSE(concurrency_gain(ScheduleMap{}, flows).has_value());
}

TEST_CASE("run tally across superframes") {
  const double t = 1e-3;
  std::vector<FlowRequest> flows{flow(0, {0, 1}, {10}, 10, 1e6), flow(1, {2, 3}, {5}, 5, 4e6)};
  RunTally tally(flows, t);

  SuperframeOutcome first;
  first.planned = flows;
  first.schedule.maxslots = 10;
  first.schedule.groups.push_back(group(0, 0, 10, {{{0, 1, 0, 1, 10, 0}, 0}}));
  first.schedule.consumed_slots = 10;
  tally.add(first);

  SuperframeOutcome second;
  second.planned = {flows[1]};
  second.schedule.maxslots = 10;
  second.schedule.groups.push_back(group(0, 0, 5, {{{1, 1, 2, 3, 5, 0}, 0}}));
  second.schedule.consumed_slots = 5;
  tally.add(second);

  const auto r = tally.report();
  CHECK(r.consumed_slots == 15);
  CHECK(r.network_throughput_bps == doctest::Approx(5e6 / (15 * t)));
  CHECK(*r.concurrency_gain == doctest::Approx(1.0));
  REQUIRE(r.per_flow_throughput.size() == 2);
  CHECK(r.per_flow_throughput[0] == doctest::Approx(1e6 / (10 * t)));
  CHECK(r.per_flow_throughput[1] == doctest::Approx(4e6 / (15 * t)));
  CHECK(tally.superframes() == 2);

  const auto gains = tally.flow_gains();
  // shares of 15 slots by payload: 3 and 12
  CHECK(gains.at(0) == doctest::Approx(10.0 / 3.0));
  CHECK(gains.at(1) == doctest::Approx(5.0 / 12.0));
}

TEST_CASE("undelivered flow counts as zero throughput") {
  std::vector<FlowRequest> flows{flow(0, {0, 1}, {10}, 10, 1e6), flow(1, {2, 3}, {5}, 5, 1e6)};
  RunTally tally(flows, 1e-3);
  SuperframeOutcome only;
  only.planned = flows;
  only.schedule.maxslots = 10;
  only.schedule.groups.push_back(group(0, 0, 10, {{{0, 1, 0, 1, 10, 0}, 0}}));
  only.schedule.consumed_slots = 10;
  tally.add(only);
  const auto r = tally.report();
  CHECK(r.per_flow_throughput[1] == 0.0);
  CHECK(*r.jain_index == doctest::Approx(0.5));
  CHECK(tally.flow_gains().count(1) == 0);
}
