#ifndef MCS_HARNESS_HPP
#define MCS_HARNESS_HPP

#include <string>
#include <vector>

#include "mcs/metrics.hpp"
#include "mcs/scenario.hpp"
#include "mcs/stability.hpp"

namespace mcs {

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation over trials
};

struct MethodAggregate {
    MetricAggregate service_quality;
    MetricAggregate rosq;
    MetricAggregate fodsq;
    MetricAggregate worker_utility;
    MetricAggregate ni;
    MetricAggregate dip_ms;
    MetricAggregate ecip;
    double mean_running_time_ms = 0.0; // stdout summary only, never in files
};

struct ExperimentResult {
    std::vector<Method> methods;
    int trials = 0;
    std::vector<MetricsReport> per_trial;    // method-major: [m * trials + t]
    std::vector<MethodAggregate> aggregates; // one per method

    // Advance-phase statistics of the hybrid book (not part of per-trial NI).
    long long futures_interactions = 0;
    int futures_rounds = 0;

    int max_rounds_observed = 0;   // across every matching loop in the run
    long long settled_trades = 0;  // individual (task, worker) settlements
    std::vector<std::string> rationality_violations; // empty on a healthy run
};

/// Runs the full Monte Carlo protocol: one market (or one per trial when
/// resampling), the advance matching once per market, then every requested
/// method on identical participation draws per trial.
ExperimentResult run_experiment(const ScenarioSpec& spec);

/// One experiment per grid value of `parameter`, which must be one of
/// overbooking_rate, risk_tolerance, n_workers, n_tasks. The master seed is
/// shared across grid points so draws stay paired.
std::vector<ExperimentResult> run_sweep(const ScenarioSpec& spec, const std::string& parameter,
                                        const std::vector<double>& grid);

/// One row per (method, trial); running time excluded so files are
/// byte-stable across reruns.
std::string format_trials_csv(const ExperimentResult& result);

/// Aggregate means and standard deviations as a JSON document.
std::string format_aggregate_json(const ExperimentResult& result);

/// Fixed-order human-readable table (includes mean running time).
std::string format_summary_table(const ExperimentResult& result);

struct StabilityRunReport {
    int instances = 0;
    std::vector<std::string> witnesses;
    bool ok() const { return witnesses.empty(); }
};

/// Certifies `instances` random small markets end to end: advance matching,
/// one transaction, and the exhaustive blocking-deviation search on each.
/// `inject_fault` corrupts one payment on purpose, as a self-test that the
/// search actually reports violations.
StabilityRunReport run_stability_certification(int instances, std::uint64_t seed,
                                               const StabilityBounds& bounds,
                                               bool inject_fault = false);

} // namespace mcs

#endif
