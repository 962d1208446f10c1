#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcs/harness.hpp"

using namespace mcs;

namespace {

ScenarioSpec small_spec() {
    ScenarioSpec spec = parse_scenario("n_tasks = 3\n"
                                       "n_workers = 10\n"
                                       "trials = 6\n"
                                       "master_seed = 11\n"
                                       "desired_quality_min = 2\n"
                                       "desired_quality_max = 10\n");
    return spec;
}

std::size_t method_index(const ExperimentResult& r, Method m) {
    for (std::size_t k = 0; k < r.methods.size(); ++k)
        if (r.methods[k] == m) return k;
    REQUIRE(false);
    return 0;
}

} // namespace

TEST_CASE("scenario text overrides defaults and tolerates comments") {
    ScenarioSpec spec = parse_scenario("# a comment\n"
                                       "n_tasks = 7   # trailing comment\n"
                                       "\n"
                                       "payment_step = 0.5\n"
                                       "methods = hybrid, conventional_s\n");
    CHECK(spec.n_tasks == 7);
    CHECK(spec.n_workers == 100); // untouched default
    CHECK(spec.payment_step == doctest::Approx(0.5));
    REQUIRE(spec.methods.size() == 2);
    CHECK(spec.methods[0] == Method::Hybrid);
    CHECK(spec.methods[1] == Method::ConventionalS);
}

TEST_CASE("scenario parsing rejects malformed input with a line number") {
    CHECK_THROWS_WITH_AS(parse_scenario("n_tasks = 3\nbogus_key = 1\n"),
                         doctest::Contains("line 2"), InputError);
    CHECK_THROWS_AS(parse_scenario("n_tasks\n"), InputError);
    CHECK_THROWS_AS(parse_scenario("methods = teleportation\n"), InputError);
    CHECK_THROWS_AS(parse_scenario("trials = 0\n"), InputError);
    CHECK_THROWS_AS(parse_scenario("payment_max = 2\n"), InputError); // below minimum cost
    CHECK_THROWS_AS(parse_scenario("cost_min = 5\ncost_max = 4\n"), InputError);
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::Hybrid, Method::ConventionalS, Method::ConventionalF,
                     Method::QualityP, Method::RandomM, Method::Negotiation})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("Hybrid "), InputError);
}

TEST_CASE("generated markets respect every configured range") {
    ScenarioSpec spec = small_spec();
    Market m = generate_market(spec, 99);
    REQUIRE(m.num_tasks() == 3);
    REQUIRE(m.num_workers() == 10);
    CHECK(validate_market(m, spec.config()).empty());
    for (const auto& t : m.tasks) {
        CHECK(t.budget >= spec.budget.lo);
        CHECK(t.budget <= spec.budget.hi);
        CHECK(t.risk_scale >= 1.0);
    }
    for (const auto& w : m.workers) {
        CHECK(w.participation_prob >= spec.participation.lo);
        CHECK(w.participation_prob <= spec.participation.hi);
    }
    for (const auto& p : m.pairs) {
        CHECK(p.cost >= spec.cost.lo);
        CHECK(p.desired_payment >= p.cost);
        CHECK(p.desired_payment <= spec.payment.hi);
        // Currency values land on the 0.1 grid.
        CHECK(std::abs(p.cost * 10.0 - std::round(p.cost * 10.0)) < 1e-9);
    }
}

TEST_CASE("market generation is a pure function of the seed") {
    ScenarioSpec spec = small_spec();
    Market a = generate_market(spec, 4);
    Market b = generate_market(spec, 4);
    Market c = generate_market(spec, 5);
    CHECK(a.pairs.size() == b.pairs.size());
    bool same = true, differs = false;
    for (std::size_t k = 0; k < a.pairs.size(); ++k) {
        same = same && a.pairs[k].cost == b.pairs[k].cost &&
               a.pairs[k].quality == b.pairs[k].quality;
        differs = differs || a.pairs[k].quality != c.pairs[k].quality;
    }
    CHECK(same);
    CHECK(differs);

    ScenarioSpec none = small_spec();
    none.n_workers = 0;
    CHECK(generate_market(none, 1).workers.empty());
}

TEST_CASE("trip ingestion maps activity to participation and distances to costs") {
    const std::string csv = "worker_id,active_days,trip_km,pickup_km,dropoff_km\n"
                            "0,20,12.5,1.0,2.0\n"
                            "1,31,30.0,6.0,3.0\n"
                            "2,31,30.0,6.0,3.0\n";
    std::vector<TripRecord> records = parse_trip_csv(csv);
    REQUIRE(records.size() == 3);
    CHECK(records[1].active_days == 31);

    ScenarioSpec spec = small_spec();
    Market m = ingest_trips(records, spec);
    REQUIRE(m.num_workers() == 3);
    CHECK(m.workers[0].participation_prob == doctest::Approx(20.0 / 31.0));
    CHECK(m.workers[1].participation_prob == doctest::Approx(1.0));
    // Identical mobility traces produce identical worker rows.
    for (int i = 0; i < m.num_tasks(); ++i) {
        CHECK(m.pair(i, 1).cost == m.pair(i, 2).cost);
        CHECK(m.pair(i, 1).quality == m.pair(i, 2).quality);
        CHECK(m.pair(i, 1).desired_payment == m.pair(i, 2).desired_payment);
    }
    // Longer journeys cost more; costs stay inside the configured range.
    for (int i = 0; i < m.num_tasks(); ++i) {
        CHECK(m.pair(i, 0).cost <= m.pair(i, 1).cost);
        CHECK(m.pair(i, 0).cost >= spec.cost.lo);
        CHECK(m.pair(i, 1).cost <= spec.cost.hi);
    }
    CHECK(validate_market(m, spec.config()).empty());
}

TEST_CASE("trip parsing rejects broken files") {
    CHECK_THROWS_AS(parse_trip_csv("nope\n0,1,2,3,4\n"), InputError);
    CHECK_THROWS_AS(
        parse_trip_csv("worker_id,active_days,trip_km,pickup_km,dropoff_km\n0,40,1,1,1\n"),
        InputError); // active_days out of range
    CHECK_THROWS_AS(
        parse_trip_csv("worker_id,active_days,trip_km,pickup_km,dropoff_km\n0,10,1,1\n"),
        InputError); // missing field
}

TEST_CASE("experiments are reproducible end to end") {
    ScenarioSpec spec = small_spec();
    ExperimentResult a = run_experiment(spec);
    ExperimentResult b = run_experiment(spec);
    CHECK(format_trials_csv(a) == format_trials_csv(b));
    CHECK(format_aggregate_json(a) == format_aggregate_json(b));
    CHECK(a.rationality_violations.empty());
    CHECK(a.trials == 6);
    CHECK(a.per_trial.size() == a.methods.size() * 6);
}

TEST_CASE("methods share participation draws within a trial") {
    ScenarioSpec spec = small_spec();
    ExperimentResult r = run_experiment(spec);
    // Identical draws mean the ratio metric is exactly 1 for the reference
    // method on every trial.
    const std::size_t cs = method_index(r, Method::ConventionalS);
    for (int t = 0; t < r.trials; ++t)
        CHECK(r.per_trial[cs * r.trials + t].rosq == doctest::Approx(1.0));
}

TEST_CASE("report files carry one row per method and trial, without timings") {
    ScenarioSpec spec = small_spec();
    spec.trials = 2;
    ExperimentResult r = run_experiment(spec);
    const std::string csv = format_trials_csv(r);
    CHECK(csv.rfind("method,trial,service_quality,rosq,fodsq,worker_utility,ni,dip,ecip\n", 0) ==
          0);
    const std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 1 + r.methods.size() * 2);
    CHECK(csv.find("running_time") == std::string::npos);
    const std::string json = format_aggregate_json(r);
    CHECK(json.find("running_time") == std::string::npos);
    CHECK(json.find("\"hybrid\"") != std::string::npos);
    // The human summary is where timing lives.
    CHECK(format_summary_table(r).find("ms") != std::string::npos);
}

TEST_CASE("parameter sweeps share the master seed across grid points") {
    ScenarioSpec spec = small_spec();
    spec.trials = 4;
    spec.methods = {Method::Hybrid, Method::ConventionalS};
    std::vector<ExperimentResult> sweep = run_sweep(spec, "overbooking_rate", {0.0, 0.2});
    REQUIRE(sweep.size() == 2);
    // Same seed, same trial count: the spot-only reference is untouched by
    // the swept parameter.
    const std::size_t cs0 = method_index(sweep[0], Method::ConventionalS);
    const std::size_t cs1 = method_index(sweep[1], Method::ConventionalS);
    for (int t = 0; t < 4; ++t)
        CHECK(sweep[0].per_trial[cs0 * 4 + t].service_quality ==
              doctest::Approx(sweep[1].per_trial[cs1 * 4 + t].service_quality));
    CHECK_THROWS_AS(run_sweep(spec, "gravity", {1.0}), InputError);
}

TEST_CASE("end-to-end certification passes and the planted fault is caught") {
    StabilityBounds bounds;
    StabilityRunReport healthy = run_stability_certification(6, 77, bounds, false);
    CHECK(healthy.instances == 6);
    CHECK(healthy.ok());
    StabilityRunReport faulty = run_stability_certification(3, 77, bounds, true);
    CHECK_FALSE(faulty.ok());
}
