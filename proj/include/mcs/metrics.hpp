#ifndef MCS_METRICS_HPP
#define MCS_METRICS_HPP

#include <vector>

#include "mcs/model.hpp"

namespace mcs {

/// Per-trial performance indicators of one method.
struct MetricsReport {
    double service_quality = 0.0;
    double rosq = 0.0;           // vs Conventional_S on the same draw
    double fodsq = 0.0;          // fraction of tasks meeting desired quality
    double worker_utility = 0.0; // currency
    long long ni = 0;            // interaction count
    double dip_ms = 0.0;
    double ecip = 0.0;           // watt-milliseconds
    double running_time_ms = 0.0;
};

/// Total quality and the fraction of tasks meeting their desired quality.
void compute_quality_metrics(const Market& market, const std::vector<double>& realized_quality,
                             double& service_quality, double& fodsq);

/// Ratio of a method's quality to Conventional_S on the same draws.
/// Throws EngineError when the reference quality is zero.
double compute_rosq(double method_quality, double conventional_s_quality);

/// Interaction overhead: delay and transmit energy weighted by per-pair
/// latency and power.
void compute_dip_ecip(const Market& market, const std::vector<long long>& interaction_counts,
                      double& dip_ms, double& ecip);

/// Total worker surplus: sum of payment minus cost over served pairs.
double compute_worker_utility(const std::vector<double>& per_worker_utility);

} // namespace mcs

#endif
