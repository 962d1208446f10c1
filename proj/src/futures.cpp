#include "mcs/futures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcs/descent.hpp"

namespace mcs {

std::vector<int> candidate_tasks(const Market& market, const MarketConfig& config, int worker,
                                 const std::vector<Money>& current_payments) {
    std::vector<int> tasks;
    const std::size_t n_workers = market.workers.size();
    for (int i = 0; i < market.num_tasks(); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) * n_workers + worker;
        if (current_payments[idx] >= config.to_units(market.pair(i, worker).cost))
            tasks.push_back(i);
    }
    return tasks;
}

Money reduce_payment(Money current, Money step, Money cost) {
    return std::max(current - step, cost);
}

bool risk_surrogate(const Market& market, const MarketConfig& config, int task,
                    const std::vector<int>& worker_set) {
    const Task& t = market.tasks[task];
    const double expected = expected_quality(market, task, worker_set);
    return expected / (t.risk_scale * t.desired_quality) >= 1.0 - config.risk_tolerance;
}

namespace {

double shortfall_probability(const Market& market, int task, const std::vector<int>& worker_set,
                             double threshold, bool tail_at_least) {
    const std::size_t n = worker_set.size();
    if (n > 20)
        throw EngineError("SetTooLarge: exact risk enumeration capped at 20 workers");
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double prob = 1.0;
        double quality = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const int j = worker_set[b];
            const double a = market.workers[j].participation_prob;
            if (mask & (1u << b)) {
                prob *= a;
                quality += market.pair(task, j).quality;
            } else {
                prob *= 1.0 - a;
            }
        }
        const bool hit = tail_at_least ? (quality >= threshold) : (quality <= threshold);
        if (hit) total += prob;
    }
    return total;
}

} // namespace

double risk_exact(const Market& market, int task, const std::vector<int>& worker_set) {
    const Task& t = market.tasks[task];
    return shortfall_probability(market, task, worker_set, t.risk_scale * t.desired_quality,
                                 /*tail_at_least=*/false);
}

double participation_tail(const Market& market, int task, const std::vector<int>& worker_set,
                          double threshold) {
    return shortfall_probability(market, task, worker_set, threshold, /*tail_at_least=*/true);
}

FuturesOutcome run_oia3m(const Market& market, const MarketConfig& config) {
    const std::size_t n_tasks = market.tasks.size();
    const std::size_t n_workers = market.workers.size();

    DescentSpec spec;
    spec.task_ids.resize(n_tasks);
    std::iota(spec.task_ids.begin(), spec.task_ids.end(), 0);
    spec.worker_ids.resize(n_workers);
    std::iota(spec.worker_ids.begin(), spec.worker_ids.end(), 0);
    spec.capacity_by_task.resize(n_tasks);
    for (std::size_t i = 0; i < n_tasks; ++i)
        spec.capacity_by_task[i] =
            config.to_units((1.0 + config.overbooking_rate) * market.tasks[i].budget);
    spec.expectation_scaled = true;

    FuturesOutcome outcome;
    outcome.interaction_counts.assign(n_tasks * n_workers, 0);

    DescentResult descent = run_payment_descent(market, config, spec, outcome.interaction_counts);

    outcome.locked_payments = std::move(descent.payments);
    outcome.rounds_used = descent.rounds;
    outcome.contracts_by_task = std::move(descent.assigned_by_task);
    outcome.contracts_by_worker.assign(n_workers, {});
    outcome.risk_ok.assign(n_tasks, 0);

    // Risk screening: a task whose converged set cannot promise enough
    // expected quality abandons futures trading entirely.
    for (std::size_t i = 0; i < n_tasks; ++i) {
        if (risk_surrogate(market, config, static_cast<int>(i), outcome.contracts_by_task[i]))
            outcome.risk_ok[i] = 1;
        else
            outcome.contracts_by_task[i].clear();
    }

    for (std::size_t i = 0; i < n_tasks; ++i)
        for (int j : outcome.contracts_by_task[i])
            outcome.contracts_by_worker[j].push_back(static_cast<int>(i));

    return outcome;
}

} // namespace mcs
