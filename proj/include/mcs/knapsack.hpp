#ifndef MCS_KNAPSACK_HPP
#define MCS_KNAPSACK_HPP

#include <cstdint>
#include <vector>

#include "mcs/model.hpp"

namespace mcs {

struct KnapsackItem {
    int item_id = 0;
    double value = 0.0; // quality units or currency, >= 0
    Money weight = 0;   // fixed-point currency, >= 0
};

struct KnapsackSolution {
    std::vector<int> chosen; // ascending item_id
    double total_value = 0.0;
    Money total_weight = 0;
};

/// Exact 0-1 knapsack by dynamic programming over the capacity dimension.
///
/// Among equal-value optima returns the lexicographically smallest chosen
/// id-set under ascending item_id, which keeps repeated runs reproducible.
/// Items heavier than the capacity are simply unaffordable and skipped;
/// zero-value items are never chosen.
KnapsackSolution solve_knapsack(const std::vector<KnapsackItem>& items, Money capacity);

} // namespace mcs

#endif
