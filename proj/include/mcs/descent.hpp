#ifndef MCS_DESCENT_HPP
#define MCS_DESCENT_HPP

#include <cstdint>
#include <vector>

#include "mcs/model.hpp"

namespace mcs {

/// Inputs of one multi-round payment-descent matching. All four matching
/// mechanisms share this loop; they differ only in the participating sets,
/// the per-task capacity, and whether values/weights are expectation-scaled
/// by each worker's participation probability.
struct DescentSpec {
    std::vector<int> task_ids;
    std::vector<int> worker_ids;
    /// Per-task knapsack capacity in money units, indexed by task id.
    std::vector<Money> capacity_by_task;
    /// Optional flat |T|x|W| eligibility mask (empty = every pair eligible).
    std::vector<std::uint8_t> eligible;
    /// true: value = a_j q_{i,j}, weight = ceil(a_j p); false: value = q_{i,j}, weight = p.
    bool expectation_scaled = false;
};

struct DescentResult {
    /// Accepted worker ids per task id (ascending), full |T| entries.
    std::vector<std::vector<int>> assigned_by_task;
    /// Final asked payments, flat |T|x|W| in money units.
    std::vector<Money> payments;
    int rounds = 0;
};

/// Runs the proposal / knapsack-selection / payment-reduction loop until no
/// asked payment changes. Each proposal (and the matching decision report)
/// increments interaction_counts at (task, worker) once per active round.
/// Throws EngineError if config.max_rounds_cap is exceeded.
DescentResult run_payment_descent(const Market& market, const MarketConfig& config,
                                  const DescentSpec& spec,
                                  std::vector<long long>& interaction_counts);

} // namespace mcs

#endif
