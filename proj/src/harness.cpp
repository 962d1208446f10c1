#include "mcs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "mcs/baselines.hpp"
#include "mcs/futures.hpp"
#include "mcs/spot.hpp"

namespace mcs {

namespace {

// Disjoint seed-stream tags so draws, shuffles, and markets never collide.
constexpr std::uint64_t kMarketStream = 0x10000;
constexpr std::uint64_t kDrawStream = 0x20000;
constexpr std::uint64_t kShuffleStream = 0x30000;
constexpr std::uint64_t kResampleStream = 0x40000;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

long long total(const std::vector<long long>& counts) {
    long long s = 0;
    for (long long c : counts) s += c;
    return s;
}

MetricsReport make_report(const Market& market, const std::vector<double>& realized_quality,
                          const std::vector<long long>& interaction_counts,
                          const std::vector<double>& worker_utility) {
    MetricsReport r;
    compute_quality_metrics(market, realized_quality, r.service_quality, r.fodsq);
    compute_dip_ecip(market, interaction_counts, r.dip_ms, r.ecip);
    r.worker_utility = compute_worker_utility(worker_utility);
    r.ni = total(interaction_counts);
    return r;
}

double safe_rosq(double quality, double reference) {
    if (reference == 0.0) return quality == 0.0 ? 1.0 : 0.0;
    return compute_rosq(quality, reference);
}

/// Settlement sanity for one method; appends human-readable violations.
struct SettlementAudit {
    const Market& market;
    const MarketConfig& config;
    bool cap_at_desired; // payment <= p^Desire holds for descent-based methods
    std::vector<std::string>& violations;
    long long& settled_trades;

    void check(const char* label, int task, int worker, Money payment, Money& outlay) {
        ++settled_trades;
        outlay += payment;
        const PairData& p = market.pair(task, worker);
        if (payment < config.to_units(p.cost))
            violations.push_back(std::string(label) + ": payment below cost at (" +
                                 std::to_string(task) + "," + std::to_string(worker) + ")");
        if (cap_at_desired && payment > config.to_units(p.desired_payment))
            violations.push_back(std::string(label) + ": payment above desired at (" +
                                 std::to_string(task) + "," + std::to_string(worker) + ")");
    }

    void check_budget(const char* label, int task, Money outlay) {
        if (outlay > config.to_units(market.tasks[task].budget))
            violations.push_back(std::string(label) + ": outlay exceeds budget for task " +
                                 std::to_string(task));
    }
};

MetricAggregate aggregate(const std::vector<double>& xs) {
    MetricAggregate a;
    if (xs.empty()) return a;
    for (double x : xs) a.mean += x;
    a.mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return a;
}

void fmt(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

} // namespace

ExperimentResult run_experiment(const ScenarioSpec& spec) {
    spec.validate();
    const MarketConfig config = spec.config();
    const bool needs_futures =
        std::any_of(spec.methods.begin(), spec.methods.end(), [](Method m) {
            return m == Method::Hybrid || m == Method::ConventionalF;
        });

    ExperimentResult result;
    result.methods = spec.methods;
    result.trials = spec.trials;
    result.per_trial.resize(spec.methods.size() * static_cast<std::size_t>(spec.trials));

    Market market;
    FuturesOutcome futures;
    auto prepare_market = [&](std::uint64_t seed) {
        market = generate_market(spec, seed);
        if (needs_futures) {
            futures = run_oia3m(market, config);
            result.futures_interactions += total(futures.interaction_counts);
            result.futures_rounds = std::max(result.futures_rounds, futures.rounds_used);
            result.max_rounds_observed = std::max(result.max_rounds_observed, futures.rounds_used);
            // Advance-book rationality: expected outlay within the slackened budget.
            for (int i = 0; i < market.num_tasks(); ++i) {
                Money expected = 0;
                for (int j : futures.contracts_by_task[i]) {
                    const Money p = futures.payment(i, j, market.num_workers());
                    expected += static_cast<Money>(
                        std::ceil(market.workers[j].participation_prob * static_cast<double>(p)));
                }
                if (expected >
                    config.to_units((1.0 + config.overbooking_rate) * market.tasks[i].budget))
                    result.rationality_violations.push_back(
                        "futures: expected outlay exceeds slackened budget for task " +
                        std::to_string(i));
            }
        }
    };

    if (!spec.resample_market) prepare_market(Rng::derive(spec.master_seed, kMarketStream));

    for (int t = 0; t < spec.trials; ++t) {
        if (spec.resample_market) prepare_market(Rng::derive(spec.master_seed, kResampleStream + t));
        Rng draw_rng(Rng::derive(spec.master_seed, kDrawStream + t));
        const ParticipationDraw draw = draw_participation(market, draw_rng);

        // The spot-only descent is the ratio reference for every method.
        const double conv_s_t0 = now_ms();
        const BaselineOutcome conv_s = run_conventional_s(market, config, draw);
        const double conv_s_elapsed = now_ms() - conv_s_t0;
        result.max_rounds_observed = std::max(result.max_rounds_observed, conv_s.rounds);
        const double reference_quality =
            make_report(market, conv_s.realized_quality, conv_s.interaction_counts,
                        conv_s.worker_utility)
                .service_quality;

        for (std::size_t m = 0; m < spec.methods.size(); ++m) {
            const Method method = spec.methods[m];
            const double t0 = now_ms();
            MetricsReport report;
            SettlementAudit audit{market, config, true, result.rationality_violations,
                                  result.settled_trades};

            auto audit_baseline = [&](const char* label, const BaselineOutcome& out) {
                for (int i = 0; i < market.num_tasks(); ++i) {
                    Money outlay = 0;
                    for (int j : out.assignment[i])
                        audit.check(label, i, j,
                                    out.payments[static_cast<std::size_t>(i) *
                                                     market.workers.size() +
                                                 j],
                                    outlay);
                    audit.check_budget(label, i, outlay);
                }
            };

            switch (method) {
                case Method::Hybrid: {
                    TransactionResult tx = run_transaction(market, config, futures, draw);
                    result.max_rounds_observed =
                        std::max({result.max_rounds_observed, tx.omom_rounds, tx.o3m_rounds});
                    std::vector<double> quality(market.tasks.size());
                    for (int i = 0; i < market.num_tasks(); ++i) quality[i] = tx.realized_quality[i];
                    std::vector<Money> outlay(market.tasks.size(), 0);
                    for (const SettledPair& s : tx.served)
                        audit.check("hybrid", s.task, s.worker, s.payment, outlay[s.task]);
                    for (int i = 0; i < market.num_tasks(); ++i)
                        audit.check_budget("hybrid", i, outlay[i]);
                    report = make_report(market, quality, tx.spot_interactions, tx.worker_utility);
                    break;
                }
                case Method::ConventionalS: {
                    report = make_report(market, conv_s.realized_quality,
                                         conv_s.interaction_counts, conv_s.worker_utility);
                    audit_baseline("conventional_s", conv_s);
                    break;
                }
                case Method::ConventionalF: {
                    BaselineOutcome out = run_conventional_f(market, config, futures, draw);
                    report = make_report(market, out.realized_quality, out.interaction_counts,
                                         out.worker_utility);
                    audit_baseline("conventional_f", out);
                    break;
                }
                case Method::QualityP: {
                    audit.cap_at_desired = false;
                    BaselineOutcome out = run_quality_p(market, config, draw);
                    report = make_report(market, out.realized_quality, out.interaction_counts,
                                         out.worker_utility);
                    audit_baseline("quality_p", out);
                    break;
                }
                case Method::RandomM: {
                    audit.cap_at_desired = false;
                    Rng shuffle_rng(Rng::derive(spec.master_seed, kShuffleStream + t));
                    BaselineOutcome out = run_random_m(market, config, draw, shuffle_rng);
                    report = make_report(market, out.realized_quality, out.interaction_counts,
                                         out.worker_utility);
                    audit_baseline("random_m", out);
                    break;
                }
                case Method::Negotiation: {
                    audit.cap_at_desired = false;
                    BaselineOutcome out = run_negotiation(market, config, draw);
                    result.max_rounds_observed = std::max(result.max_rounds_observed, out.rounds);
                    report = make_report(market, out.realized_quality, out.interaction_counts,
                                         out.worker_utility);
                    audit_baseline("negotiation", out);
                    break;
                }
            }

            report.rosq = safe_rosq(report.service_quality, reference_quality);
            report.running_time_ms =
                (method == Method::ConventionalS) ? conv_s_elapsed : now_ms() - t0;
            result.per_trial[m * static_cast<std::size_t>(spec.trials) + t] = report;
        }
    }

    result.aggregates.resize(spec.methods.size());
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
        std::vector<double> sq, rosq, fodsq, wu, ni, dip, ecip;
        double time_sum = 0.0;
        for (int t = 0; t < spec.trials; ++t) {
            const MetricsReport& r = result.per_trial[m * static_cast<std::size_t>(spec.trials) + t];
            sq.push_back(r.service_quality);
            rosq.push_back(r.rosq);
            fodsq.push_back(r.fodsq);
            wu.push_back(r.worker_utility);
            ni.push_back(static_cast<double>(r.ni));
            dip.push_back(r.dip_ms);
            ecip.push_back(r.ecip);
            time_sum += r.running_time_ms;
        }
        MethodAggregate& a = result.aggregates[m];
        a.service_quality = aggregate(sq);
        a.rosq = aggregate(rosq);
        a.fodsq = aggregate(fodsq);
        a.worker_utility = aggregate(wu);
        a.ni = aggregate(ni);
        a.dip_ms = aggregate(dip);
        a.ecip = aggregate(ecip);
        a.mean_running_time_ms = time_sum / spec.trials;
    }
    return result;
}

std::vector<ExperimentResult> run_sweep(const ScenarioSpec& spec, const std::string& parameter,
                                        const std::vector<double>& grid) {
    if (grid.empty()) throw InputError("sweep grid is empty");
    std::vector<ExperimentResult> results;
    for (double value : grid) {
        ScenarioSpec point = spec;
        if (parameter == "overbooking_rate") point.overbooking_rate = value;
        else if (parameter == "risk_tolerance") point.risk_tolerance = value;
        else if (parameter == "n_workers") point.n_workers = static_cast<int>(std::llround(value));
        else if (parameter == "n_tasks") point.n_tasks = static_cast<int>(std::llround(value));
        else throw InputError("unknown sweep parameter: " + parameter);
        results.push_back(run_experiment(point));
    }
    return results;
}

std::string format_trials_csv(const ExperimentResult& result) {
    std::string out = "method,trial,service_quality,rosq,fodsq,worker_utility,ni,dip,ecip\n";
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
        for (int t = 0; t < result.trials; ++t) {
            const MetricsReport& r =
                result.per_trial[m * static_cast<std::size_t>(result.trials) + t];
            out += method_name(result.methods[m]);
            out += ',';
            out += std::to_string(t);
            out += ',';
            fmt(out, r.service_quality);
            out += ',';
            fmt(out, r.rosq);
            out += ',';
            fmt(out, r.fodsq);
            out += ',';
            fmt(out, r.worker_utility);
            out += ',';
            out += std::to_string(r.ni);
            out += ',';
            fmt(out, r.dip_ms);
            out += ',';
            fmt(out, r.ecip);
            out += '\n';
        }
    }
    return out;
}

std::string format_aggregate_json(const ExperimentResult& result) {
    nlohmann::ordered_json doc;
    doc["trials"] = result.trials;
    nlohmann::ordered_json aggregates = nlohmann::ordered_json::object();
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
        const MethodAggregate& a = result.aggregates[m];
        nlohmann::ordered_json entry;
        auto put = [&](const char* key, const MetricAggregate& agg) {
            entry[key] = {{"mean", agg.mean}, {"std", agg.stddev}};
        };
        put("service_quality", a.service_quality);
        put("rosq", a.rosq);
        put("fodsq", a.fodsq);
        put("worker_utility", a.worker_utility);
        put("ni", a.ni);
        put("dip_ms", a.dip_ms);
        put("ecip", a.ecip);
        aggregates[method_name(result.methods[m])] = entry;
    }
    doc["aggregates"] = aggregates;
    doc["futures"] = {{"interactions", result.futures_interactions},
                      {"rounds", result.futures_rounds}};
    doc["max_rounds_observed"] = result.max_rounds_observed;
    doc["settled_trades"] = result.settled_trades;
    doc["rationality_violations"] = result.rationality_violations;
    return doc.dump(2) + "\n";
}

std::string format_summary_table(const ExperimentResult& result) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-15s %15s %8s %8s %14s %10s %12s %12s %10s\n", "method",
                  "service_quality", "RoSQ", "FoDSQ", "worker_utility", "NI", "DIP_ms", "ECIP",
                  "time_ms");
    out += buf;
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
        const MethodAggregate& a = result.aggregates[m];
        std::snprintf(buf, sizeof(buf), "%-15s %15.3f %8.4f %8.4f %14.3f %10.1f %12.3f %12.3f %10.3f\n",
                      method_name(result.methods[m]), a.service_quality.mean, a.rosq.mean,
                      a.fodsq.mean, a.worker_utility.mean, a.ni.mean, a.dip_ms.mean, a.ecip.mean,
                      a.mean_running_time_ms);
        out += buf;
    }
    if (result.futures_interactions > 0) {
        std::snprintf(buf, sizeof(buf),
                      "advance phase: %lld interactions, %d rounds (not counted in NI)\n",
                      result.futures_interactions, result.futures_rounds);
        out += buf;
    }
    return out;
}

StabilityRunReport run_stability_certification(int instances, std::uint64_t seed,
                                               const StabilityBounds& bounds, bool inject_fault) {
    StabilityRunReport report;
    report.instances = instances;

    ScenarioSpec spec; // paper-default ranges, sizes overridden per instance
    const MarketConfig config = spec.config();

    for (int k = 0; k < instances; ++k) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
        spec.n_tasks = 1 + static_cast<int>(rng.next_below(
                               static_cast<std::uint64_t>(std::min(bounds.max_tasks, 6))));
        spec.n_workers = 2 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(bounds.max_workers - 1)));
        Market market = generate_market(spec, rng.next_u64());
        FuturesOutcome futures = run_oia3m(market, config);

        if (inject_fault) {
            // Corrupt the book: push one locked payment above the asked bound.
            // When the book is empty, fabricate a contract first so the
            // corruption has something to land on.
            int fi = -1, fj = -1;
            for (int i = 0; i < market.num_tasks() && fi < 0; ++i)
                if (!futures.contracts_by_task[i].empty()) {
                    fi = i;
                    fj = futures.contracts_by_task[i].front();
                }
            if (fi < 0) {
                fi = 0;
                fj = 0;
                futures.contracts_by_task[0].push_back(0);
                futures.contracts_by_worker[0].push_back(0);
                futures.risk_ok[0] = 1;
            }
            futures.locked_payments[static_cast<std::size_t>(fi) * market.workers.size() + fj] =
                config.to_units(market.pair(fi, fj).desired_payment) +
                config.to_units(config.payment_step);
            inject_fault = false;
        }

        const ParticipationDraw draw = draw_participation(market, rng);
        StabilityReport sr = certify_transaction(market, config, futures, draw, bounds);
        const std::string tag = "instance " + std::to_string(k) + ": ";
        for (const std::string& v : sr.rationality_violations) report.witnesses.push_back(tag + v);
        if (sr.type1) report.witnesses.push_back(tag + sr.type1->describe());
        if (sr.type2) report.witnesses.push_back(tag + sr.type2->describe());
    }
    return report;
}

} // namespace mcs
