#include "mcs/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace mcs {

namespace {

constexpr double kStrict = 1e-9; // guard against float noise in strict comparisons

Money expected_weight(const Market& market, int worker, Money payment_units) {
    const double a = market.workers[worker].participation_prob;
    return static_cast<Money>(std::ceil(a * static_cast<double>(payment_units)));
}

/// Payments the descent rule can actually produce for a pair: the descending
/// lattice from the desired payment, floored at cost.
std::vector<Money> payment_lattice(const MarketConfig& config, const PairData& pair) {
    const Money step = config.to_units(config.payment_step);
    const Money cost = config.to_units(pair.cost);
    Money p = config.to_units(pair.desired_payment);
    std::vector<Money> grid;
    while (p > cost) {
        grid.push_back(p);
        p -= step;
    }
    grid.push_back(cost);
    std::sort(grid.begin(), grid.end());
    return grid;
}

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

void enforce_bounds(const Market& market, const StabilityBounds& bounds) {
    if (market.num_tasks() > bounds.max_tasks || market.num_workers() > bounds.max_workers)
        throw EngineError("BoundsExceeded: instance too large for exhaustive stability search");
}

/// Best admissible deviation of `worker` toward one task, or nothing.
struct TaskDeviation {
    double gain = 0.0;
    Money payment = 0;
    std::vector<int> eviction;
};

} // namespace

std::string BlockingWitness::describe() const {
    std::ostringstream os;
    os << "type-" << type << " blocking deviation: worker " << worker << " with tasks {";
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (k) os << ", ";
        os << tasks[k] << " @" << payments[k];
        if (k < evictions.size() && !evictions[k].empty()) {
            os << " evicting [";
            for (std::size_t e = 0; e < evictions[k].size(); ++e) {
                if (e) os << " ";
                os << evictions[k][e];
            }
            os << "]";
        }
    }
    os << "}, gain " << deviation_gain;
    return os.str();
}

std::vector<std::string> check_ir_futures(const Market& market, const MarketConfig& config,
                                          const FuturesOutcome& outcome) {
    std::vector<std::string> violations;
    const int n_workers = market.num_workers();

    for (int i = 0; i < market.num_tasks(); ++i) {
        const auto& contracted = outcome.contracts_by_task[i];
        const Money cap = config.to_units((1.0 + config.overbooking_rate) * market.tasks[i].budget);
        Money expected_outlay = 0;
        for (int j : contracted) {
            const Money p = outcome.payment(i, j, n_workers);
            const Money c = config.to_units(market.pair(i, j).cost);
            const Money d = config.to_units(market.pair(i, j).desired_payment);
            if (p < c || p > d)
                violations.push_back("payment bound violated at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            expected_outlay += expected_weight(market, j, p);
        }
        if (expected_outlay > cap)
            violations.push_back("expected outlay exceeds overbooked budget for task " +
                                 std::to_string(i));
        if (!contracted.empty() && !risk_surrogate(market, config, i, contracted))
            violations.push_back("contracted task " + std::to_string(i) +
                                 " fails the risk surrogate");
        if (!outcome.risk_ok[i] && !contracted.empty())
            violations.push_back("risk-rejected task " + std::to_string(i) + " kept contracts");
    }

    for (int j = 0; j < n_workers; ++j) {
        double utility = 0.0;
        const double a = market.workers[j].participation_prob;
        for (int i : outcome.contracts_by_worker[j])
            utility += a * (config.to_currency(outcome.payment(i, j, n_workers)) -
                            market.pair(i, j).cost);
        if (utility < -kStrict)
            violations.push_back("worker " + std::to_string(j) + " has negative expected utility");
    }
    return violations;
}

std::optional<BlockingWitness> find_blocking_coalition_futures(const Market& market,
                                                               const MarketConfig& config,
                                                               const FuturesOutcome& outcome,
                                                               int type,
                                                               const StabilityBounds& bounds) {
    enforce_bounds(market, bounds);
    const int n_workers = market.num_workers();

    for (int j = 0; j < n_workers; ++j) {
        const double a = market.workers[j].participation_prob;
        double current_utility = 0.0;
        for (int i : outcome.contracts_by_worker[j])
            current_utility += a * (config.to_currency(outcome.payment(i, j, n_workers)) -
                                    market.pair(i, j).cost);

        // The blocking conditions decouple per task: find each task's best
        // admissible deviation for this worker, then the best coalition is
        // the set of tasks with positive gain.
        std::vector<int> coalition;
        std::vector<TaskDeviation> deviations;
        double total_gain = 0.0;

        for (int i = 0; i < market.num_tasks(); ++i) {
            if (!outcome.risk_ok[i]) continue; // task abandoned futures trading
            const auto& matched = outcome.contracts_by_task[i];
            const Money cap =
                config.to_units((1.0 + config.overbooking_rate) * market.tasks[i].budget);
            const std::vector<Money> grid = payment_lattice(config, market.pair(i, j));
            const double base_quality = expected_quality(market, i, matched);

            std::optional<TaskDeviation> best;
            auto consider = [&](const std::vector<int>& eviction) {
                std::vector<int> newset;
                for (int k : matched)
                    if (!contains(eviction, k) && k != j) newset.push_back(k);
                newset.push_back(j);
                if (expected_quality(market, i, newset) <= base_quality + kStrict) return;
                Money others = 0;
                for (int k : newset)
                    if (k != j) others += expected_weight(market, k, outcome.payment(i, k, n_workers));
                for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
                    if (others + expected_weight(market, j, *it) > cap) continue;
                    const double gain = a * (config.to_currency(*it) - market.pair(i, j).cost);
                    if (!best || gain > best->gain)
                        best = TaskDeviation{gain, *it, eviction};
                    break; // largest feasible lattice payment maximizes the gain
                }
            };

            if (type == 2) {
                if (contains(matched, j)) continue; // additions only
                consider({});
            } else {
                // nonempty eviction sets up to the configured size
                const std::size_t n = matched.size();
                for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                    if (std::popcount(mask) > bounds.max_eviction_set) continue;
                    std::vector<int> eviction;
                    for (std::size_t b = 0; b < n; ++b)
                        if (mask & (1u << b)) eviction.push_back(matched[b]);
                    consider(eviction);
                }
            }

            if (best && best->gain > kStrict) {
                coalition.push_back(i);
                deviations.push_back(*best);
                total_gain += best->gain;
            }
        }

        if (!coalition.empty() && total_gain > current_utility + kStrict) {
            BlockingWitness w;
            w.type = type;
            w.worker = j;
            w.tasks = coalition;
            for (const TaskDeviation& d : deviations) {
                w.evictions.push_back(d.eviction);
                w.payments.push_back(d.payment);
            }
            w.deviation_gain = total_gain - current_utility;
            return w;
        }
    }
    return std::nullopt;
}

std::optional<BlockingWitness> find_blocking_pair_omom(const Market& market,
                                                       const MarketConfig& config, int task,
                                                       const std::vector<int>& present_workers,
                                                       const SpotPhaseResult& result,
                                                       const StabilityBounds& bounds) {
    if (static_cast<int>(present_workers.size()) > bounds.max_workers)
        throw EngineError("BoundsExceeded: instance too large for exhaustive stability search");

    const std::size_t n_workers = market.workers.size();
    const auto& retained = result.assigned_by_task[task];
    const Money budget = config.to_units(market.tasks[task].budget);

    double retained_quality = 0.0;
    Money retained_outlay = 0;
    for (int k : retained) {
        retained_quality += market.pair(task, k).quality;
        retained_outlay += result.payments[static_cast<std::size_t>(task) * n_workers + k];
    }

    for (int j : present_workers) {
        if (contains(retained, j)) continue;
        const std::vector<Money> grid = payment_lattice(config, market.pair(task, j));

        auto try_eviction = [&](const std::vector<int>& eviction,
                                int type) -> std::optional<BlockingWitness> {
            double evicted_quality = 0.0;
            Money freed = 0;
            for (int k : eviction) {
                evicted_quality += market.pair(task, k).quality;
                freed += result.payments[static_cast<std::size_t>(task) * n_workers + k];
            }
            if (market.pair(task, j).quality <= evicted_quality + kStrict) return std::nullopt;
            for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
                if (retained_outlay - freed + *it > budget) continue;
                BlockingWitness w;
                w.type = type;
                w.worker = j;
                w.tasks = {task};
                w.evictions = {eviction};
                w.payments = {*it};
                w.deviation_gain = market.pair(task, j).quality - evicted_quality;
                return w;
            }
            return std::nullopt;
        };

        if (auto w = try_eviction({}, 2)) return w;
        const std::size_t n = retained.size();
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (std::popcount(mask) > bounds.max_eviction_set) continue;
            std::vector<int> eviction;
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (1u << b)) eviction.push_back(retained[b]);
            if (auto w = try_eviction(eviction, 1)) return w;
        }
    }
    return std::nullopt;
}

std::optional<BlockingWitness> find_blocking_coalition_o3m(const Market& market,
                                                           const MarketConfig& config,
                                                           const FuturesOutcome& outcome,
                                                           const RealizedPartition& partition,
                                                           const SpotPhaseResult& result,
                                                           int type,
                                                           const StabilityBounds& bounds) {
    enforce_bounds(market, bounds);
    const std::size_t n_workers = market.workers.size();

    for (int j : partition.spot_pool) {
        double current_utility = 0.0;
        for (int i : partition.surplus_tasks)
            if (contains(result.assigned_by_task[i], j))
                current_utility +=
                    config.to_currency(result.payments[static_cast<std::size_t>(i) * n_workers + j]) -
                    market.pair(i, j).cost;

        std::vector<int> coalition;
        std::vector<TaskDeviation> deviations;
        double total_gain = 0.0;

        for (int i : partition.surplus_tasks) {
            if (contains(outcome.contracts_by_task[i], j)) continue; // never re-recruited
            const auto& recruited = result.assigned_by_task[i];
            const Money cap = partition.remaining_budget[i];
            const std::vector<Money> grid = payment_lattice(config, market.pair(i, j));

            double base_quality = 0.0;
            for (int k : recruited) base_quality += market.pair(i, k).quality;

            std::optional<TaskDeviation> best;
            auto consider = [&](const std::vector<int>& eviction) {
                double quality = market.pair(i, j).quality;
                Money others = 0;
                for (int k : recruited) {
                    if (contains(eviction, k) || k == j) continue;
                    quality += market.pair(i, k).quality;
                    others += result.payments[static_cast<std::size_t>(i) * n_workers + k];
                }
                if (quality <= base_quality + kStrict) return;
                for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
                    if (others + *it > cap) continue;
                    const double gain = config.to_currency(*it) - market.pair(i, j).cost;
                    if (!best || gain > best->gain) best = TaskDeviation{gain, *it, eviction};
                    break;
                }
            };

            if (type == 2) {
                if (contains(recruited, j)) continue;
                consider({});
            } else {
                const std::size_t n = recruited.size();
                for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                    if (std::popcount(mask) > bounds.max_eviction_set) continue;
                    std::vector<int> eviction;
                    for (std::size_t b = 0; b < n; ++b)
                        if (mask & (1u << b)) eviction.push_back(recruited[b]);
                    consider(eviction);
                }
            }

            if (best && best->gain > kStrict) {
                coalition.push_back(i);
                deviations.push_back(*best);
                total_gain += best->gain;
            }
        }

        if (!coalition.empty() && total_gain > current_utility + kStrict) {
            BlockingWitness w;
            w.type = type;
            w.worker = j;
            w.tasks = coalition;
            for (const TaskDeviation& d : deviations) {
                w.evictions.push_back(d.eviction);
                w.payments.push_back(d.payment);
            }
            w.deviation_gain = total_gain - current_utility;
            return w;
        }
    }
    return std::nullopt;
}

StabilityReport certify_transaction(const Market& market, const MarketConfig& config,
                                    const FuturesOutcome& outcome,
                                    const ParticipationDraw& draw,
                                    const StabilityBounds& bounds) {
    StabilityReport report;
    report.rationality_violations = check_ir_futures(market, config, outcome);

    auto record = [&](std::optional<BlockingWitness> w) {
        if (!w) return;
        auto& slot = (w->type == 1) ? report.type1 : report.type2;
        if (!slot) slot = std::move(w);
    };

    record(find_blocking_coalition_futures(market, config, outcome, 1, bounds));
    record(find_blocking_coalition_futures(market, config, outcome, 2, bounds));

    RealizedPartition partition = realize_transaction(market, config, outcome, draw);
    for (int i : partition.over_budget_tasks) {
        SpotPhaseResult omom = run_omom(market, config, i, partition.present_contract_workers[i]);
        Money outlay = 0;
        for (int k : omom.assigned_by_task[i])
            outlay += omom.payments[static_cast<std::size_t>(i) * market.workers.size() + k];
        if (outlay > config.to_units(market.tasks[i].budget))
            report.rationality_violations.push_back("OMOM outlay exceeds budget for task " +
                                                    std::to_string(i));
        record(find_blocking_pair_omom(market, config, i, partition.present_contract_workers[i],
                                       omom, bounds));
    }

    if (!partition.surplus_tasks.empty()) {
        SpotPhaseResult o3m = run_o3m(market, config, outcome, partition);
        for (int i : partition.surplus_tasks) {
            Money outlay = 0;
            for (int k : o3m.assigned_by_task[i])
                outlay += o3m.payments[static_cast<std::size_t>(i) * market.workers.size() + k];
            if (outlay > partition.remaining_budget[i])
                report.rationality_violations.push_back(
                    "O3M outlay exceeds remaining budget for task " + std::to_string(i));
        }
        record(find_blocking_coalition_o3m(market, config, outcome, partition, o3m, 1, bounds));
        record(find_blocking_coalition_o3m(market, config, outcome, partition, o3m, 2, bounds));
    }

    return report;
}

} // namespace mcs
