#include "mcs/model.hpp"

#include <sstream>

namespace mcs {

const char* validation_code_name(ValidationCode code) {
    switch (code) {
        case ValidationCode::NonPositiveBudget: return "NonPositiveBudget";
        case ValidationCode::NonPositiveQuality: return "NonPositiveQuality";
        case ValidationCode::PaymentBelowCost: return "PaymentBelowCost";
        case ValidationCode::DimensionMismatch: return "DimensionMismatch";
        case ValidationCode::BadProbability: return "BadProbability";
        case ValidationCode::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

namespace {

void add(std::vector<ValidationError>& out, ValidationCode code, int ti, int wi,
         const std::string& msg) {
    out.push_back(ValidationError{code, ti, wi, msg});
}

} // namespace

std::vector<ValidationError> validate_market(const Market& market, const MarketConfig& config) {
    std::vector<ValidationError> errors;

    if (config.money_scale < 1)
        add(errors, ValidationCode::BadConfig, -1, -1, "money_scale must be >= 1");
    if (config.max_rounds_cap < 1)
        add(errors, ValidationCode::BadConfig, -1, -1, "max_rounds_cap must be >= 1");
    if (!(config.risk_tolerance > 0.0 && config.risk_tolerance <= 1.0))
        add(errors, ValidationCode::BadConfig, -1, -1, "risk_tolerance must lie in (0,1]");
    if (config.overbooking_rate < 0.0)
        add(errors, ValidationCode::BadConfig, -1, -1, "overbooking_rate must be >= 0");
    if (!(config.payment_step > 0.0))
        add(errors, ValidationCode::BadConfig, -1, -1, "payment_step must be > 0");

    const std::size_t expected_pairs = market.tasks.size() * market.workers.size();
    if (market.pairs.size() != expected_pairs) {
        std::ostringstream os;
        os << "pair matrix has " << market.pairs.size() << " entries, expected "
           << market.tasks.size() << "x" << market.workers.size();
        add(errors, ValidationCode::DimensionMismatch, -1, -1, os.str());
        return errors; // pairwise checks would index out of bounds
    }

    for (int i = 0; i < market.num_tasks(); ++i) {
        const Task& t = market.tasks[i];
        if (!(t.budget > 0.0))
            add(errors, ValidationCode::NonPositiveBudget, i, -1,
                "task " + std::to_string(i) + " has non-positive budget");
        if (!(t.desired_quality > 0.0))
            add(errors, ValidationCode::NonPositiveQuality, i, -1,
                "task " + std::to_string(i) + " has non-positive desired quality");
        if (!(t.risk_scale >= 1.0))
            add(errors, ValidationCode::BadConfig, i, -1,
                "task " + std::to_string(i) + " has risk_scale < 1");
        if (!(t.tx_power > 0.0))
            add(errors, ValidationCode::BadConfig, i, -1,
                "task " + std::to_string(i) + " has non-positive tx_power");
    }

    for (int j = 0; j < market.num_workers(); ++j) {
        const Worker& w = market.workers[j];
        // a_j = 0 workers can never trade; rejected outright.
        if (!(w.participation_prob > 0.0 && w.participation_prob <= 1.0))
            add(errors, ValidationCode::BadProbability, -1, j,
                "worker " + std::to_string(j) + " participation_prob outside (0,1]");
        if (!(w.tx_power > 0.0))
            add(errors, ValidationCode::BadConfig, -1, j,
                "worker " + std::to_string(j) + " has non-positive tx_power");
    }

    for (int i = 0; i < market.num_tasks(); ++i) {
        for (int j = 0; j < market.num_workers(); ++j) {
            const PairData& p = market.pair(i, j);
            std::string at = " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (!(p.quality > 0.0))
                add(errors, ValidationCode::NonPositiveQuality, i, j, "non-positive quality" + at);
            if (!(p.cost > 0.0))
                add(errors, ValidationCode::BadConfig, i, j, "non-positive cost" + at);
            if (p.desired_payment < p.cost)
                add(errors, ValidationCode::PaymentBelowCost, i, j,
                    "desired_payment below cost" + at);
            if (!(p.uplink_latency_ms > 0.0) || !(p.downlink_latency_ms > 0.0))
                add(errors, ValidationCode::BadConfig, i, j, "non-positive latency" + at);
        }
    }

    return errors;
}

ParticipationDraw draw_participation(const Market& market, Rng& rng) {
    ParticipationDraw draw;
    draw.alpha.resize(market.workers.size());
    for (std::size_t j = 0; j < market.workers.size(); ++j)
        draw.alpha[j] = rng.bernoulli(market.workers[j].participation_prob) ? 1 : 0;
    return draw;
}

double expected_quality(const Market& market, int task, const std::vector<int>& worker_set) {
    double total = 0.0;
    for (int j : worker_set)
        total += market.workers[j].participation_prob * market.pair(task, j).quality;
    return total;
}

double expected_worker_utility(const Market& market, int worker,
                               const std::vector<int>& task_set,
                               const std::vector<double>& payments_by_task) {
    const double a = market.workers[worker].participation_prob;
    double total = 0.0;
    for (int i : task_set) {
        if (i < 0 || static_cast<std::size_t>(i) >= payments_by_task.size())
            throw EngineError("missing payment for task " + std::to_string(i));
        total += a * (payments_by_task[i] - market.pair(i, worker).cost);
    }
    return total;
}

} // namespace mcs
