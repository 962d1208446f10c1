#include "mcs/knapsack.hpp"

#include <algorithm>
#include <numeric>

namespace mcs {

KnapsackSolution solve_knapsack(const std::vector<KnapsackItem>& items, Money capacity) {
    KnapsackSolution solution;
    if (capacity < 0) capacity = 0;

    // Usable items: affordable and worth something. Zero-value items can
    // never improve the objective, and dropping them keeps the chosen set
    // lexicographically minimal.
    std::vector<const KnapsackItem*> usable;
    usable.reserve(items.size());
    for (const KnapsackItem& item : items)
        if (item.value > 0.0 && item.weight <= capacity) usable.push_back(&item);
    if (usable.empty()) return solution;

    std::sort(usable.begin(), usable.end(),
              [](const KnapsackItem* a, const KnapsackItem* b) { return a->item_id < b->item_id; });

    // All weights sharing a common divisor lets us shrink the DP exactly:
    // every reachable weight is a multiple of g, so capacity can be floored
    // to the same grid without changing the optimum.
    Money g = 0;
    for (const KnapsackItem* item : usable) g = std::gcd(g, item->weight);
    if (g == 0) g = 1; // all weights zero: take everything usable
    const Money cap = capacity / g;

    const std::size_t n = usable.size();
    const std::size_t width = static_cast<std::size_t>(cap) + 1;

    // dp[i][w] = best value achievable with items i..n-1 under capacity w.
    thread_local std::vector<double> dp;
    dp.assign((n + 1) * width, 0.0);

    for (std::size_t i = n; i-- > 0;) {
        const Money w_i = usable[i]->weight / g;
        const double v_i = usable[i]->value;
        const double* next = dp.data() + (i + 1) * width;
        double* row = dp.data() + i * width;
        for (Money w = 0; w < w_i; ++w) row[w] = next[w];
        for (Money w = w_i; w <= cap; ++w)
            row[w] = std::max(next[w], v_i + next[w - w_i]);
    }

    // Front-to-back reconstruction; taking an item whenever it preserves the
    // optimum yields the lexicographically smallest optimal id-set.
    Money remaining = cap;
    for (std::size_t i = 0; i < n; ++i) {
        const Money w_i = usable[i]->weight / g;
        const double v_i = usable[i]->value;
        const double* row = dp.data() + i * width;
        const double* next = dp.data() + (i + 1) * width;
        if (w_i <= remaining && v_i + next[remaining - w_i] == row[remaining]) {
            solution.chosen.push_back(usable[i]->item_id);
            solution.total_value += v_i;
            solution.total_weight += usable[i]->weight;
            remaining -= w_i;
        }
    }
    return solution;
}

} // namespace mcs
