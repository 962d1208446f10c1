#include "mcs/spot.hpp"

#include <algorithm>

#include "mcs/descent.hpp"

namespace mcs {

RealizedPartition realize_transaction(const Market& market, const MarketConfig& config,
                                      const FuturesOutcome& outcome,
                                      const ParticipationDraw& draw) {
    const int n_tasks = market.num_tasks();
    const int n_workers = market.num_workers();
    if (static_cast<int>(draw.alpha.size()) != n_workers)
        throw EngineError("participation draw does not match market size");

    RealizedPartition part;
    part.present_contract_workers.assign(n_tasks, {});
    part.remaining_budget.assign(n_tasks, 0);
    part.realized_contract_outlay.assign(n_tasks, 0);

    for (int j = 0; j < n_workers; ++j)
        if (draw.present(j)) part.spot_pool.push_back(j);

    for (int i = 0; i < n_tasks; ++i) {
        Money realized = 0;
        for (int j : outcome.contracts_by_task[i]) {
            if (!draw.present(j)) continue;
            part.present_contract_workers[i].push_back(j);
            realized += outcome.payment(i, j, n_workers);
        }
        part.realized_contract_outlay[i] = realized;
        const Money budget = config.to_units(market.tasks[i].budget);
        if (realized > budget) {
            part.over_budget_tasks.push_back(i);
        } else if (realized < budget) {
            part.surplus_tasks.push_back(i);
            part.remaining_budget[i] = budget - realized;
        }
        // realized == budget: contracts settle unchanged, no spot action
    }
    return part;
}

SpotPhaseResult run_omom(const Market& market, const MarketConfig& config, int task,
                         const std::vector<int>& present_workers) {
    const std::size_t cells = market.tasks.size() * market.workers.size();

    DescentSpec spec;
    spec.task_ids = {task};
    spec.worker_ids = present_workers;
    spec.capacity_by_task.assign(market.tasks.size(), 0);
    spec.capacity_by_task[task] = config.to_units(market.tasks[task].budget);
    spec.expectation_scaled = false;

    SpotPhaseResult result;
    result.interaction_counts.assign(cells, 0);
    DescentResult descent = run_payment_descent(market, config, spec, result.interaction_counts);
    result.assigned_by_task = std::move(descent.assigned_by_task);
    result.payments = std::move(descent.payments);
    result.rounds = descent.rounds;
    return result;
}

SpotPhaseResult run_o3m(const Market& market, const MarketConfig& config,
                        const FuturesOutcome& outcome, const RealizedPartition& partition) {
    const std::size_t n_workers = market.workers.size();
    const std::size_t cells = market.tasks.size() * n_workers;

    DescentSpec spec;
    spec.task_ids = partition.surplus_tasks;
    spec.worker_ids = partition.spot_pool;
    spec.capacity_by_task.assign(market.tasks.size(), 0);
    for (int i : partition.surplus_tasks)
        spec.capacity_by_task[i] = partition.remaining_budget[i];
    spec.expectation_scaled = false;

    // A task's own contract workers are never recruited again on the spot.
    spec.eligible.assign(cells, 1);
    for (int i : partition.surplus_tasks)
        for (int j : outcome.contracts_by_task[i])
            spec.eligible[static_cast<std::size_t>(i) * n_workers + j] = 0;

    SpotPhaseResult result;
    result.interaction_counts.assign(cells, 0);
    DescentResult descent = run_payment_descent(market, config, spec, result.interaction_counts);
    result.assigned_by_task = std::move(descent.assigned_by_task);
    result.payments = std::move(descent.payments);
    result.rounds = descent.rounds;
    return result;
}

TransactionResult settle(const Market& market, const MarketConfig& config,
                         const FuturesOutcome& outcome, const RealizedPartition& partition,
                         const std::vector<SpotPhaseResult>& omom_results,
                         const std::vector<int>& omom_tasks,
                         const SpotPhaseResult& o3m_result) {
    const int n_tasks = market.num_tasks();
    const int n_workers = market.num_workers();
    const std::size_t cells = static_cast<std::size_t>(n_tasks) * n_workers;

    TransactionResult tx;
    tx.realized_quality.assign(n_tasks, 0.0);
    tx.task_outlay.assign(n_tasks, 0);
    tx.worker_utility.assign(n_workers, 0.0);
    tx.spot_interactions.assign(cells, 0);

    std::vector<std::uint8_t> is_over(n_tasks, 0);
    for (int i : partition.over_budget_tasks) is_over[i] = 1;

    auto serve = [&](int i, int j, Money payment) {
        tx.realized_quality[i] += market.pair(i, j).quality;
        tx.task_outlay[i] += payment;
        tx.worker_utility[j] += config.to_currency(payment) - market.pair(i, j).cost;
        tx.served.push_back(SettledPair{i, j, payment});
    };

    // Over-budget tasks: only the OMOM retentions serve, at spot prices.
    if (omom_tasks.size() != omom_results.size())
        throw EngineError("OMOM result list does not match its task list");
    for (std::size_t k = 0; k < omom_tasks.size(); ++k) {
        const int i = omom_tasks[k];
        if (!is_over[i]) throw EngineError("OMOM result for a task that is not over budget");
        const SpotPhaseResult& r = omom_results[k];
        for (int j : r.assigned_by_task[i])
            serve(i, j, r.payments[static_cast<std::size_t>(i) * n_workers + j]);
        tx.omom_rounds = std::max(tx.omom_rounds, r.rounds);
        for (std::size_t idx = 0; idx < cells; ++idx)
            tx.spot_interactions[idx] += r.interaction_counts[idx];
    }

    // Everyone else keeps its present contract workers at locked payments.
    for (int i = 0; i < n_tasks; ++i) {
        if (is_over[i]) continue;
        for (int j : partition.present_contract_workers[i])
            serve(i, j, outcome.payment(i, j, n_workers));
    }

    // Surplus tasks add their O3M recruits at spot prices.
    if (!o3m_result.assigned_by_task.empty()) {
        for (int i : partition.surplus_tasks) {
            for (int j : o3m_result.assigned_by_task[i]) {
                for (int contracted : outcome.contracts_by_task[i])
                    if (contracted == j)
                        throw EngineError("O3M recruited a contract worker of the same task");
                serve(i, j, o3m_result.payments[static_cast<std::size_t>(i) * n_workers + j]);
            }
        }
        tx.o3m_rounds = o3m_result.rounds;
        for (std::size_t idx = 0; idx < cells; ++idx)
            tx.spot_interactions[idx] += o3m_result.interaction_counts[idx];
    }

    return tx;
}

TransactionResult run_transaction(const Market& market, const MarketConfig& config,
                                  const FuturesOutcome& outcome, const ParticipationDraw& draw) {
    RealizedPartition partition = realize_transaction(market, config, outcome, draw);

    std::vector<SpotPhaseResult> omom_results;
    for (int i : partition.over_budget_tasks)
        omom_results.push_back(run_omom(market, config, i, partition.present_contract_workers[i]));

    SpotPhaseResult o3m_result;
    if (!partition.surplus_tasks.empty())
        o3m_result = run_o3m(market, config, outcome, partition);

    return settle(market, config, outcome, partition, omom_results,
                  partition.over_budget_tasks, o3m_result);
}

} // namespace mcs
