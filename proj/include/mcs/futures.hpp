#ifndef MCS_FUTURES_HPP
#define MCS_FUTURES_HPP

#include <vector>

#include "mcs/model.hpp"

namespace mcs {

/// Long-term contract book produced by the in-advance matching.
struct FuturesOutcome {
    std::vector<std::vector<int>> contracts_by_task;   // worker ids, ascending
    std::vector<std::vector<int>> contracts_by_worker; // task ids, ascending
    std::vector<Money> locked_payments;                // flat |T|x|W|, money units
    std::vector<std::uint8_t> risk_ok;                 // per task
    int rounds_used = 0;
    std::vector<long long> interaction_counts;         // flat |T|x|W|

    Money payment(int task, int worker, int n_workers) const {
        return locked_payments[static_cast<std::size_t>(task) * n_workers + worker];
    }
};

/// Tasks whose current asked payment covers cost for this worker.
std::vector<int> candidate_tasks(const Market& market, const MarketConfig& config, int worker,
                                 const std::vector<Money>& current_payments);

/// One payment-descent step: max(current - step, cost).
Money reduce_payment(Money current, Money step, Money cost);

/// Expected-quality surrogate of the risk constraint:
/// sum of a_j q_{i,j} over the set >= (1 - risk_tolerance) * risk_scale * Q_i.
bool risk_surrogate(const Market& market, const MarketConfig& config, int task,
                    const std::vector<int>& worker_set);

/// Exact probability that realized quality falls short of the scaled desired
/// quality: Pr{ sum of alpha_j q_{i,j} <= risk_scale * Q_i }, by enumerating
/// every participation outcome. Throws EngineError for sets above 20 workers.
double risk_exact(const Market& market, int task, const std::vector<int>& worker_set);

/// Complement tail at an arbitrary threshold: Pr{ sum of alpha_j q_{i,j} >= threshold }.
double participation_tail(const Market& market, int task, const std::vector<int>& worker_set,
                          double threshold);

/// Overbooking-enabled in-advance many-to-many matching. Runs the payment
/// descent over the whole market with expectation-scaled values and weights
/// under the overbooked budget (1 + tau) B_i, then strips every contract of
/// any task whose converged worker set fails the risk surrogate.
FuturesOutcome run_oia3m(const Market& market, const MarketConfig& config);

} // namespace mcs

#endif
