#include <doctest.h>

#include <random>

#include "mmwsched/waterfill.hpp"
#include "oracles.hpp"

using namespace mmw;

TEST_CASE("water filling small cases") {
  const auto one = solve_waterfill({{2.0}, 10.0});
  CHECK(one.allocations[0] == doctest::Approx(10.0));
  CHECK(one.active_count == 1);

  // equal gains share equally
  const auto eq = solve_waterfill({{1.0, 1.0, 1.0, 1.0}, 8.0});
  for (double a : eq.allocations) CHECK(a == doctest::Approx(2.0));

  // floors 1, 0.5: level = (1 + 1.5) / 2 = 1.25
  const auto two = solve_waterfill({{1.0, 2.0}, 1.0});
  CHECK(two.water_level == doctest::Approx(1.25));
  CHECK(two.allocations[0] == doctest::Approx(0.25));
  CHECK(two.allocations[1] == doctest::Approx(0.75));

  // a weak channel is switched off: floors 0.1 and 10, budget 1
  const auto off = solve_waterfill({{10.0, 0.1}, 1.0});
  CHECK(off.active_count == 1);
  CHECK(off.allocations[1] == 0.0);
  CHECK(off.allocations[0] == doctest::Approx(1.0));
}

TEST_CASE("water filling rejects bad input") {
  CHECK_THROWS_AS(solve_waterfill({{}, 1.0}), std::domain_error);
  CHECK_THROWS_AS(solve_waterfill({{1.0}, 0.0}), std::domain_error);
  CHECK_THROWS_AS(solve_waterfill({{1.0, -2.0}, 1.0}), std::domain_error);
  CHECK_THROWS_AS(solve_waterfill({{1.0, 0.0}, 1.0}), std::domain_error);
}

TEST_CASE("water filling agrees with bisection") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(std::pow(10.0, lg(rng)));
    const double budget = std::pow(10.0, lg(rng) + 1);
    const WaterfillProblem prob{g, budget};
    const auto sol = solve_waterfill(prob);
    const auto ref = oracle::waterfill_bisect(g, budget);
    const auto kkt = kkt_residual(prob, sol);
    CHECK(kkt.allocation <= 1e-9 * std::max(1.0, budget));
    CHECK(kkt.budget <= 1e-9);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      CHECK(sol.allocations[k] >= 0.0);
      CHECK(std::abs(sol.allocations[k] - ref[k]) <= 1e-9 * std::max(1.0, budget));
      total += sol.allocations[k];
    }
    CHECK(total == doctest::Approx(budget).epsilon(1e-9));
  }
}

TEST_CASE("bound throughput") {
  Topology t;
  t.room = {16, 16};
  t.nodes = {{0, {0, 0}, 0}, {1, {2, 0}, 0}, {2, {4, 0}, 0}};
  const RadioParams radio;
  const auto ant = AntennaConfig::from_beamwidth_deg(20);
  FlowRequest f;
  f.id = 0;
  f.source = 0;
  f.destination = 2;
  f.hop_path = {0, 1, 2};
  f.hop_slots = {5, 5};
  const std::vector<FlowRequest> flows{f};
  const std::vector<double> gains{2.0, 2.0};
  const double bits = bound_throughput(flows, gains, t, radio, ant, 100);
  const double rate = oracle::rate(2.0, 3, 7e9, 1e-4, 12, -134, 60e9);
  // symmetric: 50 slots each at gain 2
  CHECK(bits == doctest::Approx(2 * 50 * radio.slot_duration_s * 2.0 * rate).epsilon(1e-9));
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(bound_throughput(flows, wrong, t, radio, ant, 100), std::invalid_argument);
}
