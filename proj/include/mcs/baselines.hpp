#ifndef MCS_BASELINES_HPP
#define MCS_BASELINES_HPP

#include <vector>

#include "mcs/futures.hpp"
#include "mcs/model.hpp"
#include "mcs/rng.hpp"

namespace mcs {

struct BaselineOutcome {
    std::vector<std::vector<int>> assignment; // worker ids per task, ascending
    std::vector<Money> payments;              // flat |T|x|W|, money units
    std::vector<long long> interaction_counts;
    int rounds = 0;
    std::vector<double> realized_quality;     // per task
    std::vector<Money> task_outlay;           // per task
    std::vector<double> worker_utility;       // per worker, currency
};

/// Pure spot trading: the many-to-many payment descent run at transaction
/// time over present workers, practical budget, no overbooking or risk.
BaselineOutcome run_conventional_s(const Market& market, const MarketConfig& config,
                                   const ParticipationDraw& draw);

/// Pure futures trading: contracts only, present workers paid in ascending id
/// order until the practical budget runs out; no spot repair of any kind.
BaselineOutcome run_conventional_f(const Market& market, const MarketConfig& config,
                                   const FuturesOutcome& outcome, const ParticipationDraw& draw);

/// Greedy best-quality-first selection at desired payments.
BaselineOutcome run_quality_p(const Market& market, const MarketConfig& config,
                              const ParticipationDraw& draw);

/// Random-order selection at desired payments under a seeded stream.
BaselineOutcome run_random_m(const Market& market, const MarketConfig& config,
                             const ParticipationDraw& draw, Rng& rng);

/// Uniform-price descent: each task negotiates one price for all its workers.
BaselineOutcome run_negotiation(const Market& market, const MarketConfig& config,
                                const ParticipationDraw& draw);

} // namespace mcs

#endif
