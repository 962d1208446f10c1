#include "mcs/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "mcs/descent.hpp"
#include "mcs/knapsack.hpp"

namespace mcs {

namespace {

BaselineOutcome make_empty(const Market& market) {
    BaselineOutcome out;
    const std::size_t cells = market.tasks.size() * market.workers.size();
    out.assignment.assign(market.tasks.size(), {});
    out.payments.assign(cells, 0);
    out.interaction_counts.assign(cells, 0);
    out.realized_quality.assign(market.tasks.size(), 0.0);
    out.task_outlay.assign(market.tasks.size(), 0);
    out.worker_utility.assign(market.workers.size(), 0.0);
    return out;
}

void settle_pair(const Market& market, const MarketConfig& config, BaselineOutcome& out,
                 int i, int j, Money payment) {
    out.assignment[i].push_back(j);
    out.payments[static_cast<std::size_t>(i) * market.workers.size() + j] = payment;
    out.realized_quality[i] += market.pair(i, j).quality;
    out.task_outlay[i] += payment;
    out.worker_utility[j] += config.to_currency(payment) - market.pair(i, j).cost;
}

std::vector<int> present_workers(const ParticipationDraw& draw) {
    std::vector<int> present;
    for (std::size_t j = 0; j < draw.alpha.size(); ++j)
        if (draw.alpha[j]) present.push_back(static_cast<int>(j));
    return present;
}

} // namespace

BaselineOutcome run_conventional_s(const Market& market, const MarketConfig& config,
                                   const ParticipationDraw& draw) {
    BaselineOutcome out = make_empty(market);

    DescentSpec spec;
    spec.task_ids.resize(market.tasks.size());
    std::iota(spec.task_ids.begin(), spec.task_ids.end(), 0);
    spec.worker_ids = present_workers(draw);
    spec.capacity_by_task.resize(market.tasks.size());
    for (int i = 0; i < market.num_tasks(); ++i)
        spec.capacity_by_task[i] = config.to_units(market.tasks[i].budget);
    spec.expectation_scaled = false;

    DescentResult descent = run_payment_descent(market, config, spec, out.interaction_counts);
    out.rounds = descent.rounds;
    for (int i = 0; i < market.num_tasks(); ++i)
        for (int j : descent.assigned_by_task[i])
            settle_pair(market, config, out, i, j,
                        descent.payments[static_cast<std::size_t>(i) * market.workers.size() + j]);
    return out;
}

BaselineOutcome run_conventional_f(const Market& market, const MarketConfig& config,
                                   const FuturesOutcome& outcome, const ParticipationDraw& draw) {
    BaselineOutcome out = make_empty(market);
    const int n_workers = market.num_workers();

    // No eviction mechanism exists here: present contract workers are paid in
    // ascending id order until the practical budget is exhausted; the rest
    // are released unpaid and do not serve.
    for (int i = 0; i < market.num_tasks(); ++i) {
        const Money budget = config.to_units(market.tasks[i].budget);
        Money spent = 0;
        for (int j : outcome.contracts_by_task[i]) {
            if (!draw.present(j)) continue;
            const Money p = outcome.payment(i, j, n_workers);
            if (spent + p > budget) continue;
            spent += p;
            settle_pair(market, config, out, i, j, p);
        }
    }
    out.rounds = 0; // no onsite decision-making
    return out;
}

BaselineOutcome run_quality_p(const Market& market, const MarketConfig& config,
                              const ParticipationDraw& draw) {
    BaselineOutcome out = make_empty(market);
    const std::vector<int> present = present_workers(draw);

    for (int i = 0; i < market.num_tasks(); ++i) {
        std::vector<int> order = present;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return market.pair(i, a).quality > market.pair(i, b).quality;
        });
        const Money budget = config.to_units(market.tasks[i].budget);
        Money spent = 0;
        for (int j : order) {
            const Money p = config.to_units(market.pair(i, j).desired_payment);
            out.interaction_counts[static_cast<std::size_t>(i) * market.workers.size() + j] += 1;
            if (spent + p > budget) continue;
            spent += p;
            settle_pair(market, config, out, i, j, p);
        }
        std::sort(out.assignment[i].begin(), out.assignment[i].end());
    }
    out.rounds = 1;
    return out;
}

BaselineOutcome run_random_m(const Market& market, const MarketConfig& config,
                             const ParticipationDraw& draw, Rng& rng) {
    BaselineOutcome out = make_empty(market);

    for (int i = 0; i < market.num_tasks(); ++i) {
        std::vector<int> order = present_workers(draw);
        rng.shuffle(order);
        const Money budget = config.to_units(market.tasks[i].budget);
        Money spent = 0;
        for (int j : order) {
            const Money p = config.to_units(market.pair(i, j).desired_payment);
            out.interaction_counts[static_cast<std::size_t>(i) * market.workers.size() + j] += 1;
            if (spent + p > budget) continue;
            spent += p;
            settle_pair(market, config, out, i, j, p);
        }
        std::sort(out.assignment[i].begin(), out.assignment[i].end());
    }
    out.rounds = 1;
    return out;
}

BaselineOutcome run_negotiation(const Market& market, const MarketConfig& config,
                                const ParticipationDraw& draw) {
    BaselineOutcome out = make_empty(market);
    const std::vector<int> present = present_workers(draw);
    const Money step = config.to_units(config.payment_step);

    for (int i = 0; i < market.num_tasks(); ++i) {
        if (present.empty()) continue;
        const Money budget = config.to_units(market.tasks[i].budget);
        Money price = 0;
        Money min_cost = 0;
        for (int j : present) {
            price = std::max(price, config.to_units(market.pair(i, j).desired_payment));
            const Money c = config.to_units(market.pair(i, j).cost);
            min_cost = (min_cost == 0) ? c : std::min(min_cost, c);
        }

        auto select_at = [&](Money uniform_price) {
            std::vector<KnapsackItem> items;
            for (int j : present) {
                if (config.to_units(market.pair(i, j).cost) > uniform_price) continue;
                out.interaction_counts[static_cast<std::size_t>(i) * market.workers.size() + j] += 1;
                items.push_back(KnapsackItem{j, market.pair(i, j).quality, uniform_price});
            }
            return solve_knapsack(items, budget).chosen;
        };

        int rounds = 1;
        std::vector<int> selection = select_at(price);
        while (price - step >= min_cost) {
            std::vector<int> next = select_at(price - step);
            ++rounds;
            // A nonempty selection that survives a price drop is the settled
            // agreement; the workers keep the pre-drop price.
            if (!selection.empty() && next == selection) break;
            selection = std::move(next);
            price -= step;
        }
        out.rounds = std::max(out.rounds, rounds);
        for (int j : selection) settle_pair(market, config, out, i, j, price);
    }
    return out;
}

} // namespace mcs
