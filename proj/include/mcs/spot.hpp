#ifndef MCS_SPOT_HPP
#define MCS_SPOT_HPP

#include <vector>

#include "mcs/futures.hpp"
#include "mcs/model.hpp"

namespace mcs {

/// Transaction-time view of the contract book under one participation draw.
struct RealizedPartition {
    std::vector<int> over_budget_tasks;  // realized contract payments > B_i
    std::vector<int> surplus_tasks;      // realized contract payments < B_i
    std::vector<std::vector<int>> present_contract_workers; // per task, ascending
    std::vector<int> spot_pool;          // all present workers
    std::vector<Money> remaining_budget; // B'_i, money units; meaningful for surplus tasks
    std::vector<Money> realized_contract_outlay; // sum of alpha_j p^F per task
};

/// Outcome of one spot-side matching phase (OMOM eviction or O3M recruiting).
struct SpotPhaseResult {
    std::vector<std::vector<int>> assigned_by_task; // full |T| entries
    std::vector<Money> payments;                    // flat |T|x|W| final asks
    int rounds = 0;
    std::vector<long long> interaction_counts;      // flat |T|x|W|
};

/// One settled service pair, used for conservation and rationality checks.
struct SettledPair {
    int task;
    int worker;
    Money payment;
};

struct TransactionResult {
    std::vector<double> realized_quality;  // per task
    std::vector<Money> task_outlay;        // per task
    std::vector<double> worker_utility;    // per worker, currency
    std::vector<SettledPair> served;
    std::vector<long long> spot_interactions; // flat |T|x|W|, OMOM + O3M rounds
    int omom_rounds = 0;
    int o3m_rounds = 0;
};

/// Splits tasks by realized contract payments against the practical budget.
/// A task landing exactly on B_i falls in neither set and settles as-is.
RealizedPartition realize_transaction(const Market& market, const MarketConfig& config,
                                      const FuturesOutcome& outcome,
                                      const ParticipationDraw& draw);

/// Eviction matching for one over-budget task, restricted to its present
/// contract workers, capacity B_i, asks re-initialized at the desired payment.
SpotPhaseResult run_omom(const Market& market, const MarketConfig& config, int task,
                         const std::vector<int>& present_workers);

/// Recruiting matching over all surplus tasks and the present spot pool;
/// a task never re-recruits its own contract workers.
SpotPhaseResult run_o3m(const Market& market, const MarketConfig& config,
                        const FuturesOutcome& outcome, const RealizedPartition& partition);

/// Combines futures contracts, OMOM retentions, and O3M recruitments into
/// the final payments, qualities, and utilities of one transaction.
TransactionResult settle(const Market& market, const MarketConfig& config,
                         const FuturesOutcome& outcome, const RealizedPartition& partition,
                         const std::vector<SpotPhaseResult>& omom_results,
                         const std::vector<int>& omom_tasks,
                         const SpotPhaseResult& o3m_result);

/// Convenience: full spot pipeline for one draw.
TransactionResult run_transaction(const Market& market, const MarketConfig& config,
                                  const FuturesOutcome& outcome, const ParticipationDraw& draw);

} // namespace mcs

#endif
