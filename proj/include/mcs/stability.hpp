#ifndef MCS_STABILITY_HPP
#define MCS_STABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "mcs/futures.hpp"
#include "mcs/model.hpp"
#include "mcs/spot.hpp"

namespace mcs {

/// A concrete profitable deviation found by exhaustive search.
struct BlockingWitness {
    int type = 0;                 // 1 = fairness violation, 2 = wastefulness
    int worker = -1;
    std::vector<int> tasks;
    std::vector<std::vector<int>> evictions; // per task in `tasks` (type 1)
    std::vector<Money> payments;             // per task in `tasks`, money units
    double deviation_gain = 0.0;             // strict improvement for the worker side
    std::string describe() const;
};

struct StabilityBounds {
    int max_tasks = 8;
    int max_workers = 10;
    int max_eviction_set = 4;
};

struct StabilityReport {
    std::vector<std::string> rationality_violations;
    std::optional<BlockingWitness> type1;
    std::optional<BlockingWitness> type2;
    bool certified_strongly_stable() const {
        return rationality_violations.empty() && !type1 && !type2;
    }
};

/// Individual rationality of the futures book: overbooked-budget bound,
/// risk surrogate for contracted tasks, payment bounds, and nonnegative
/// expected worker utility. Empty result means all hold.
std::vector<std::string> check_ir_futures(const Market& market, const MarketConfig& config,
                                          const FuturesOutcome& outcome);

/// Exhaustive blocking-coalition search over deviation payments on the
/// mechanism's descending payment lattice. Throws EngineError when the
/// instance exceeds the bounds.
std::optional<BlockingWitness> find_blocking_coalition_futures(const Market& market,
                                                               const MarketConfig& config,
                                                               const FuturesOutcome& outcome,
                                                               int type,
                                                               const StabilityBounds& bounds);

/// Blocking-pair search for one task's eviction matching.
std::optional<BlockingWitness> find_blocking_pair_omom(const Market& market,
                                                       const MarketConfig& config, int task,
                                                       const std::vector<int>& present_workers,
                                                       const SpotPhaseResult& result,
                                                       const StabilityBounds& bounds);

/// Blocking-coalition search for the recruiting matching.
std::optional<BlockingWitness> find_blocking_coalition_o3m(const Market& market,
                                                           const MarketConfig& config,
                                                           const FuturesOutcome& outcome,
                                                           const RealizedPartition& partition,
                                                           const SpotPhaseResult& result,
                                                           int type,
                                                           const StabilityBounds& bounds);

/// Full certification of one futures outcome plus one realized transaction.
StabilityReport certify_transaction(const Market& market, const MarketConfig& config,
                                    const FuturesOutcome& outcome,
                                    const ParticipationDraw& draw,
                                    const StabilityBounds& bounds);

} // namespace mcs

#endif
