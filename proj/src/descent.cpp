#include "mcs/descent.hpp"

#include <algorithm>
#include <cmath>

#include "mcs/knapsack.hpp"

namespace mcs {

// Round-synchronous payment descent. Each round is one level of the
// descending price schedule: a pair that has never been accepted asks
// max(desired - (round-1)*step, cost). Tasks re-select until their decisions
// are mutually consistent at the current level (a worker evicted mid-round
// lowers its ask to the round's level and the affected tasks decide again),
// then the schedule descends one step. The loop therefore terminates within
// max ceil((desired - cost)/step) + 2 rounds: once the schedule reaches every
// cost, one more unchanged round ends it.
DescentResult run_payment_descent(const Market& market, const MarketConfig& config,
                                  const DescentSpec& spec,
                                  std::vector<long long>& interaction_counts) {
    const std::size_t n_tasks = market.tasks.size();
    const std::size_t n_workers = market.workers.size();
    const std::size_t cells = n_tasks * n_workers;
    const Money step = config.to_units(config.payment_step);

    DescentResult result;
    result.assigned_by_task.assign(n_tasks, {});
    result.payments.assign(cells, 0);

    std::vector<Money> cost(cells, 0), desired(cells, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        cost[idx] = config.to_units(market.pairs[idx].cost);
        desired[idx] = config.to_units(market.pairs[idx].desired_payment);
        result.payments[idx] = desired[idx];
    }

    auto pair_eligible = [&](int i, int j) {
        return spec.eligible.empty() ||
               spec.eligible[static_cast<std::size_t>(i) * n_workers + j] != 0;
    };

    std::vector<std::uint8_t> accepted(cells, 0);
    std::vector<KnapsackItem> items;

    auto select_task = [&](int i) {
        items.clear();
        for (int j : spec.worker_ids) {
            const std::size_t idx = static_cast<std::size_t>(i) * n_workers + j;
            if (!pair_eligible(i, j)) continue;
            if (result.payments[idx] < cost[idx]) continue; // never true; guards intent
            KnapsackItem item;
            item.item_id = j;
            if (spec.expectation_scaled) {
                const double a = market.workers[j].participation_prob;
                item.value = a * market.pair(i, j).quality;
                item.weight =
                    static_cast<Money>(std::ceil(a * static_cast<double>(result.payments[idx])));
            } else {
                item.value = market.pair(i, j).quality;
                item.weight = result.payments[idx];
            }
            items.push_back(item);
        }
        KnapsackSolution sol = solve_knapsack(items, spec.capacity_by_task[i]);
        for (int j : result.assigned_by_task[i])
            accepted[static_cast<std::size_t>(i) * n_workers + j] = 0;
        result.assigned_by_task[i] = sol.chosen;
        for (int j : sol.chosen) accepted[static_cast<std::size_t>(i) * n_workers + j] = 1;
    };

    for (int round = 1;; ++round) {
        if (round > config.max_rounds_cap)
            throw EngineError("RoundCapExceeded: payment descent did not converge within " +
                              std::to_string(config.max_rounds_cap) + " rounds");
        result.rounds = round;
        bool changed = false;

        // One proposal plus one decision report per eligible pair this round.
        for (int j : spec.worker_ids)
            for (int i : spec.task_ids) {
                const std::size_t idx = static_cast<std::size_t>(i) * n_workers + j;
                if (pair_eligible(i, j) && result.payments[idx] >= cost[idx])
                    interaction_counts[idx] += 1;
            }

        // Task decisions at the current price level, iterated to a fixed
        // point: an eviction lowers that ask to the level and re-opens the
        // decisions of every task the worker proposed to.
        for (;;) {
            for (int i : spec.task_ids) select_task(i);
            bool dropped = false;
            for (int j : spec.worker_ids) {
                for (int i : spec.task_ids) {
                    const std::size_t idx = static_cast<std::size_t>(i) * n_workers + j;
                    if (!pair_eligible(i, j) || accepted[idx]) continue;
                    const Money level =
                        std::max(desired[idx] - static_cast<Money>(round - 1) * step, cost[idx]);
                    if (result.payments[idx] > level) {
                        result.payments[idx] = level;
                        dropped = true;
                        changed = true;
                    }
                }
            }
            if (!dropped) break;
        }

        // The schedule descends one step for everyone still unaccepted.
        for (int j : spec.worker_ids) {
            for (int i : spec.task_ids) {
                const std::size_t idx = static_cast<std::size_t>(i) * n_workers + j;
                if (!pair_eligible(i, j) || accepted[idx]) continue;
                const Money next =
                    std::max(desired[idx] - static_cast<Money>(round) * step, cost[idx]);
                if (result.payments[idx] > next) {
                    result.payments[idx] = next;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    return result;
}

} // namespace mcs
