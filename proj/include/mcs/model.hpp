#ifndef MCS_MODEL_HPP
#define MCS_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcs/rng.hpp"

namespace mcs {

/// Fixed-point currency in integer units (see MarketConfig::money_scale).
using Money = std::int64_t;

class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

struct Task {
    int id = 0;
    double budget = 0.0;            // B_i
    double desired_quality = 0.0;   // Q_i
    double risk_scale = 1.0;        // quality-threshold multiplier, >= 1
    double tx_power = 10.0;         // owner transmit power, watts
};

struct Worker {
    int id = 0;
    double participation_prob = 0.0; // per-transaction show-up probability
    double tx_power = 0.3;           // worker transmit power, watts
};

struct PairData {
    double quality = 0.0;          // q_{i,j}
    double cost = 0.0;             // c_{i,j}
    double desired_payment = 0.0;  // upper payment bound asked initially
    double uplink_latency_ms = 1.0;
    double downlink_latency_ms = 1.0;
};

/// Immutable problem instance: tasks, workers and the dense pairwise data.
struct Market {
    std::vector<Task> tasks;
    std::vector<Worker> workers;
    std::vector<PairData> pairs; // row-major |tasks| x |workers|

    int num_tasks() const { return static_cast<int>(tasks.size()); }
    int num_workers() const { return static_cast<int>(workers.size()); }

    const PairData& pair(int task, int worker) const {
        return pairs[static_cast<std::size_t>(task) * workers.size() + worker];
    }
    PairData& pair(int task, int worker) {
        return pairs[static_cast<std::size_t>(task) * workers.size() + worker];
    }
};

struct MarketConfig {
    double overbooking_rate = 0.2;  // tau >= 0
    double payment_step = 1.0;      // descent step per rejection, currency
    double risk_tolerance = 0.2;    // acceptable failure probability, (0,1]
    int money_scale = 100;          // fixed-point units per currency unit
    int max_rounds_cap = 100000;    // diagnostic safety bound

    Money to_units(double currency) const {
        return static_cast<Money>(std::llround(currency * money_scale));
    }
    double to_currency(Money units) const {
        return static_cast<double>(units) / money_scale;
    }
};

enum class ValidationCode {
    NonPositiveBudget,
    NonPositiveQuality,
    PaymentBelowCost,
    DimensionMismatch,
    BadProbability,
    BadConfig,
};

struct ValidationError {
    ValidationCode code;
    int task_index;    // -1 when not applicable
    int worker_index;  // -1 when not applicable
    std::string message;
};

/// Checks every type invariant; returns all violations (empty == valid).
std::vector<ValidationError> validate_market(const Market& market, const MarketConfig& config);

const char* validation_code_name(ValidationCode code);

/// One transaction's realized participation vector.
struct ParticipationDraw {
    std::vector<std::uint8_t> alpha; // one entry per worker, 0 = no-show

    bool present(int worker) const { return alpha[static_cast<std::size_t>(worker)] != 0; }
};

/// Independent Bernoulli(a_j) draw per worker from the given stream.
ParticipationDraw draw_participation(const Market& market, Rng& rng);

/// Expected service quality of a worker set for one task: sum of a_j * q_{i,j}.
double expected_quality(const Market& market, int task, const std::vector<int>& worker_set);

/// Expected net utility of a worker over a task set at the given payments
/// (currency): sum of a_j * (p - c). Throws EngineError on a missing payment.
double expected_worker_utility(const Market& market, int worker,
                               const std::vector<int>& task_set,
                               const std::vector<double>& payments_by_task);

} // namespace mcs

#endif
