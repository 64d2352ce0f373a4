#include "mmwsched/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmw {

WaterfillSolution solve_waterfill(const WaterfillProblem& problem) {
  const auto& gains = problem.gains;
  if (gains.empty()) throw std::domain_error("solve_waterfill: no gains");
  if (!(problem.budget > 0.0) || !std::isfinite(problem.budget))
    throw std::domain_error("solve_waterfill: budget must be positive");
  for (double g : gains)
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::domain_error("solve_waterfill: gains must be positive");

  const std::size_t n = gains.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

  // prefix[k] = sum of the k smallest floors 1/gain.
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + 1.0 / gains[order[k]];

  std::size_t active = n;
  double level = (problem.budget + prefix[n]) / static_cast<double>(n);
  while (active > 1 && level <= 1.0 / gains[order[active - 1]]) {
    --active;
    level = (problem.budget + prefix[active]) / static_cast<double>(active);
  }

  WaterfillSolution out;
  out.water_level = level;
  out.active_count = static_cast<int>(active);
  out.allocations.assign(n, 0.0);
  for (std::size_t k = 0; k < active; ++k)
    out.allocations[order[k]] = level - 1.0 / gains[order[k]];
  return out;
}

KktResidual kkt_residual(const WaterfillProblem& problem,
                         const WaterfillSolution& solution) {
  KktResidual r;
  double total = 0.0;
  for (std::size_t i = 0; i < problem.gains.size(); ++i) {
    const double expected =
        std::max(0.0, solution.water_level - 1.0 / problem.gains[i]);
    r.allocation = std::max(r.allocation, std::abs(solution.allocations[i] - expected));
    total += solution.allocations[i];
  }
  r.budget = std::abs(total - problem.budget) / problem.budget;
  return r;
}

double bound_throughput(std::span<const FlowRequest> flows,
                        std::span<const double> gains, const Topology& topo,
                        const RadioParams& radio, const AntennaConfig& antenna,
                        int budget_slots) {
  std::vector<double> rates;
  for (const auto& flow : flows)
    for (std::size_t k = 0; k + 1 < flow.hop_path.size(); ++k)
      rates.push_back(aligned_link_rate(topo.node(flow.hop_path[k]).position,
                                        topo.node(flow.hop_path[k + 1]).position,
                                        radio, antenna));
  if (rates.size() != gains.size())
    throw std::invalid_argument("bound_throughput: one gain per hop required");

  const WaterfillProblem problem{{gains.begin(), gains.end()},
                                 static_cast<double>(budget_slots)};
  const auto solution = solve_waterfill(problem);
  double bits = 0.0;
  for (std::size_t h = 0; h < rates.size(); ++h)
    bits += solution.allocations[h] * radio.slot_duration_s * gains[h] * rates[h];
  return bits;
}

}  // namespace mmw
