#include "mcs/metrics.hpp"

#include <numeric>

namespace mcs {

void compute_quality_metrics(const Market& market, const std::vector<double>& realized_quality,
                             double& service_quality, double& fodsq) {
    service_quality = 0.0;
    int met = 0;
    for (int i = 0; i < market.num_tasks(); ++i) {
        service_quality += realized_quality[i];
        if (realized_quality[i] >= market.tasks[i].desired_quality) ++met;
    }
    fodsq = market.tasks.empty() ? 0.0 : static_cast<double>(met) / market.num_tasks();
}

double compute_rosq(double method_quality, double conventional_s_quality) {
    if (conventional_s_quality == 0.0)
        throw EngineError("DivisionByZero: Conventional_S service quality is zero");
    return method_quality / conventional_s_quality;
}

void compute_dip_ecip(const Market& market, const std::vector<long long>& interaction_counts,
                      double& dip_ms, double& ecip) {
    dip_ms = 0.0;
    ecip = 0.0;
    const std::size_t n_workers = market.workers.size();
    for (int i = 0; i < market.num_tasks(); ++i) {
        for (int j = 0; j < market.num_workers(); ++j) {
            const long long n = interaction_counts[static_cast<std::size_t>(i) * n_workers + j];
            if (n == 0) continue;
            const PairData& p = market.pair(i, j);
            dip_ms += static_cast<double>(n) * (p.downlink_latency_ms + p.uplink_latency_ms);
            ecip += static_cast<double>(n) * (market.tasks[i].tx_power * p.downlink_latency_ms +
                                              market.workers[j].tx_power * p.uplink_latency_ms);
        }
    }
}

double compute_worker_utility(const std::vector<double>& per_worker_utility) {
    return std::accumulate(per_worker_utility.begin(), per_worker_utility.end(), 0.0);
}

} // namespace mcs
