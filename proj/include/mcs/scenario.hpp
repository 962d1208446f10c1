#ifndef MCS_SCENARIO_HPP
#define MCS_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mcs/model.hpp"

namespace mcs {

/// Bad user-supplied input (scenario files, trip records, option values).
/// Distinct from EngineError so the CLI can map it to its own exit code.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

enum class Method {
    Hybrid,
    ConventionalS,
    ConventionalF,
    QualityP,
    RandomM,
    Negotiation,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name); // throws InputError

/// Everything needed to build markets and drive Monte Carlo experiments.
struct ScenarioSpec {
    int n_tasks = 30;
    int n_workers = 100;
    int trials = 1000;
    std::uint64_t master_seed = 1;
    std::vector<Method> methods = {Method::Hybrid,        Method::ConventionalS,
                                   Method::ConventionalF, Method::QualityP,
                                   Method::RandomM,       Method::Negotiation};

    Range cost{3.0, 6.0};
    Range payment{6.0, 10.0};
    Range quality{1.0, 5.0};
    Range budget{30.0, 50.0};
    Range desired_quality{30.0, 35.0};
    Range risk_scale{1.0, 1.05};
    Range participation{0.6452, 0.9677};
    Range uplink_ms{0.5, 11.0};
    Range downlink_ms{0.5, 4.0};
    Range worker_power{0.2, 0.4};
    Range task_power{6.0, 20.0};

    double risk_tolerance = 0.2;   // acceptable shortfall probability
    double overbooking_rate = 0.2; // budget slack for advance contracts
    double payment_step = 1.0;
    int money_scale = 100;
    bool resample_market = false; // fresh market per trial instead of draws-only

    MarketConfig config() const;
    /// Throws InputError on empty/unordered ranges, trials < 1, or a payment
    /// range that cannot dominate the cost range.
    void validate() const;
};

/// Flat key=value text; '#' starts a comment; unknown keys are errors.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario_file(const std::string& path);

/// Samples a market from the spec's ranges. Currency-valued fields are
/// quantized to 0.1 and participation to 1e-4 so repeated runs are exact.
Market generate_market(const ScenarioSpec& spec, std::uint64_t seed);

struct TripRecord {
    int worker_id = 0;
    int active_days = 0; // out of 31
    double trip_km = 0.0;
    double pickup_km = 0.0;
    double dropoff_km = 0.0;
};

/// CSV with header `worker_id,active_days,trip_km,pickup_km,dropoff_km`.
std::vector<TripRecord> parse_trip_csv(const std::string& text);

/// Builds a market from mobility records: participation from active days,
/// costs from total distance, qualities from inverse proximity, all
/// range-scaled into the spec's bounds. Task-side fields are sampled from
/// the spec's ranges under its master seed.
Market ingest_trips(const std::vector<TripRecord>& records, const ScenarioSpec& spec);

/// Writes tasks.csv / workers.csv / pairs.csv under `dir` (created if absent).
void write_market_bundle(const Market& market, const std::string& dir);

} // namespace mcs

#endif
