#pragma once

#include <span>
#include <vector>

#include "mmwsched/radio_model.hpp"
#include "mmwsched/topology.hpp"

namespace mmw {

/// Split `budget` slots among requests with concurrency gains `gains`,
/// maximising sum(log(1 + gain * slots)).
struct WaterfillProblem {
  std::vector<double> gains;
  double budget = 0.0;
};

struct WaterfillSolution {
  std::vector<double> allocations;  ///< input order
  double water_level = 0.0;
  int active_count = 0;
};

/// Closed-form water level over a shrinking active set: gains are sorted so
/// that 1/gain ascends, and the largest prefix whose level stays above its
/// last member's 1/gain is kept. Allocations are (level - 1/gain)^+.
WaterfillSolution solve_waterfill(const WaterfillProblem& problem);

/// Largest |allocation - (level - 1/gain)^+| and the budget residual.
struct KktResidual {
  double allocation = 0.0;
  double budget = 0.0;
};

KktResidual kkt_residual(const WaterfillProblem& problem,
                         const WaterfillSolution& solution);

/// Theoretical throughput bound, in bits per superframe: `budget_slots` are
/// water-filled over every hop of `flows` (hop_path order) using one gain
/// per hop, and each hop's allocation is carried at gain * link rate.
double bound_throughput(std::span<const FlowRequest> flows,
                        std::span<const double> gains, const Topology& topo,
                        const RadioParams& radio, const AntennaConfig& antenna,
                        int budget_slots);

}  // namespace mmw
