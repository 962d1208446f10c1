#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "mcs/baselines.hpp"
#include "mcs/scenario.hpp"

using namespace mcs;

namespace {

Market three_worker_market() {
    Market m;
    m.tasks.push_back({0, 10.0, 5.0, 1.0, 10.0});
    for (int j = 0; j < 3; ++j) m.workers.push_back({j, 0.8, 0.3});
    m.pairs = {{5.0, 3.0, 7.0, 1.0, 1.0}, {4.0, 3.0, 6.0, 1.0, 1.0}, {3.0, 3.0, 5.0, 1.0, 1.0}};
    return m;
}

ParticipationDraw all_present(int n) {
    ParticipationDraw d;
    d.alpha.assign(n, 1);
    return d;
}

FuturesOutcome book_with(const Market& m, const std::vector<std::vector<int>>& contracts,
                         const std::vector<std::vector<double>>& payments,
                         const MarketConfig& cfg) {
    FuturesOutcome out;
    const int W = m.num_workers();
    out.contracts_by_task = contracts;
    out.contracts_by_worker.assign(W, {});
    out.locked_payments.assign(static_cast<std::size_t>(m.num_tasks()) * W, 0);
    out.risk_ok.assign(m.num_tasks(), 1);
    out.interaction_counts.assign(out.locked_payments.size(), 0);
    for (int i = 0; i < m.num_tasks(); ++i)
        for (int j : contracts[i]) {
            out.contracts_by_worker[j].push_back(i);
            out.locked_payments[static_cast<std::size_t>(i) * W + j] =
                cfg.to_units(payments[i][j]);
        }
    return out;
}

long long total_interactions(const BaselineOutcome& out) {
    return std::accumulate(out.interaction_counts.begin(), out.interaction_counts.end(), 0LL);
}

} // namespace

TEST_CASE("spot-only descent settles nothing when nobody shows") {
    Market m = three_worker_market();
    ParticipationDraw d;
    d.alpha.assign(3, 0);
    BaselineOutcome out = run_conventional_s(m, MarketConfig{}, d);
    CHECK(out.assignment[0].empty());
    CHECK(out.realized_quality[0] == 0.0);
    CHECK(total_interactions(out) == 0);
}

TEST_CASE("spot-only descent stays within the practical budget") {
    Market m = three_worker_market();
    MarketConfig cfg;
    BaselineOutcome out = run_conventional_s(m, cfg, all_present(3));
    CHECK(out.task_outlay[0] <= cfg.to_units(10.0));
    CHECK_FALSE(out.assignment[0].empty());
    for (int j : out.assignment[0]) {
        const Money p = out.payments[static_cast<std::size_t>(j)];
        CHECK(p >= cfg.to_units(m.pair(0, j).cost));
        CHECK(p <= cfg.to_units(m.pair(0, j).desired_payment));
    }
}

TEST_CASE("contracts-only settlement pays present workers in id order until budget") {
    Market m = three_worker_market();
    m.tasks[0].budget = 12.0;
    MarketConfig cfg;
    FuturesOutcome book = book_with(m, {{0, 1, 2}}, {{7.0, 6.0, 5.0}}, cfg);

    SUBCASE("budget exhausts midway; later ids are released unpaid") {
        BaselineOutcome out = run_conventional_f(m, cfg, book, all_present(3));
        // 7 fits, 7+6 > 12 so worker 1 is skipped, 7+5 = 12 fits.
        CHECK(out.assignment[0] == std::vector<int>{0, 2});
        CHECK(out.task_outlay[0] == cfg.to_units(12.0));
        CHECK(out.worker_utility[1] == 0.0);
        CHECK(out.rounds == 0);
        CHECK(total_interactions(out) == 0); // no onsite decision-making
    }
    SUBCASE("absent contract workers do not serve or get paid") {
        ParticipationDraw d = all_present(3);
        d.alpha[0] = 0;
        BaselineOutcome out = run_conventional_f(m, cfg, book, d);
        CHECK(out.assignment[0] == std::vector<int>{1, 2});
        CHECK(out.task_outlay[0] == cfg.to_units(11.0));
    }
}

TEST_CASE("quality-first greedy takes the best worker it can afford") {
    Market m = three_worker_market();
    MarketConfig cfg;
    // Sorted by quality: worker 0 (7 fits, spent 7), worker 1 (13 > 10),
    // worker 2 (12 > 10). Only worker 0 serves, at its full asked payment.
    BaselineOutcome out = run_quality_p(m, cfg, all_present(3));
    CHECK(out.assignment[0] == std::vector<int>{0});
    CHECK(out.task_outlay[0] == cfg.to_units(7.0));
    CHECK(out.worker_utility[0] == doctest::Approx(4.0));
    CHECK(total_interactions(out) == 3); // every present worker is probed
    CHECK(out.rounds == 1);
}

TEST_CASE("quality-first breaks quality ties by ascending id") {
    Market m = three_worker_market();
    for (auto& p : m.pairs) p.quality = 4.0;
    m.tasks[0].budget = 6.0;
    BaselineOutcome out = run_quality_p(m, MarketConfig{}, all_present(3));
    // Equal qualities keep id order; worker 0 asks 7 > 6 and is skipped,
    // worker 1 asks exactly 6.
    CHECK(out.assignment[0] == std::vector<int>{1});
}

TEST_CASE("random-order selection is seed-deterministic and budget-bounded") {
    ScenarioSpec spec;
    spec.n_tasks = 2;
    spec.n_workers = 12;
    Market m = generate_market(spec, 21);
    MarketConfig cfg = spec.config();
    ParticipationDraw d = all_present(12);

    Rng a(77), b(77), c(78);
    BaselineOutcome x = run_random_m(m, cfg, d, a);
    BaselineOutcome y = run_random_m(m, cfg, d, b);
    BaselineOutcome z = run_random_m(m, cfg, d, c);
    CHECK(x.assignment == y.assignment);
    CHECK(x.payments == y.payments);
    bool any_difference = z.assignment != x.assignment;
    (void)any_difference; // different seeds may coincide; only invariants below are binding
    for (int i = 0; i < m.num_tasks(); ++i) CHECK(x.task_outlay[i] <= cfg.to_units(m.tasks[i].budget));
}

TEST_CASE("random-order selection with a tiny budget settles nothing but still probes") {
    Market m = three_worker_market();
    m.tasks[0].budget = 1.0;
    Rng r(5);
    BaselineOutcome out = run_random_m(m, MarketConfig{}, all_present(3), r);
    CHECK(out.assignment[0].empty());
    CHECK(total_interactions(out) == 3);
}

TEST_CASE("uniform-price negotiation settles a lone worker at its asked payment") {
    Market m;
    m.tasks.push_back({0, 30.0, 5.0, 1.0, 10.0});
    m.workers.push_back({0, 0.8, 0.3});
    m.pairs = {{5.0, 3.0, 8.0, 1.0, 1.0}};
    MarketConfig cfg;
    BaselineOutcome out = run_negotiation(m, cfg, all_present(1));
    // The opening selection at 8 survives the drop to 7, so 8 stands.
    CHECK(out.assignment[0] == std::vector<int>{0});
    CHECK(out.payments[0] == cfg.to_units(8.0));
}

TEST_CASE("uniform-price negotiation pays symmetric workers the same price") {
    Market m;
    m.tasks.push_back({0, 30.0, 5.0, 1.0, 10.0});
    for (int j = 0; j < 2; ++j) m.workers.push_back({j, 0.8, 0.3});
    m.pairs = {{5.0, 3.0, 8.0, 1.0, 1.0}, {5.0, 3.0, 8.0, 1.0, 1.0}};
    MarketConfig cfg;
    BaselineOutcome out = run_negotiation(m, cfg, all_present(2));
    CHECK(out.assignment[0] == std::vector<int>{0, 1});
    CHECK(out.payments[0] == out.payments[1]);
}

TEST_CASE("uniform-price negotiation keeps one price per task within bounds") {
    ScenarioSpec spec;
    spec.n_tasks = 3;
    spec.n_workers = 10;
    for (int iter = 0; iter < 10; ++iter) {
        Market m = generate_market(spec, 900 + iter);
        MarketConfig cfg = spec.config();
        BaselineOutcome out = run_negotiation(m, cfg, all_present(10));
        for (int i = 0; i < m.num_tasks(); ++i) {
            Money price = -1;
            for (int j : out.assignment[i]) {
                const Money p = out.payments[static_cast<std::size_t>(i) * 10 + j];
                if (price < 0) price = p;
                CHECK(p == price);
                CHECK(p >= cfg.to_units(m.pair(i, j).cost));
            }
            CHECK(out.task_outlay[i] <= cfg.to_units(m.tasks[i].budget));
        }
    }
}

TEST_CASE("every baseline stays budget-feasible on random instances") {
    ScenarioSpec spec;
    spec.n_tasks = 4;
    spec.n_workers = 15;
    for (int iter = 0; iter < 8; ++iter) {
        Market m = generate_market(spec, 1300 + iter);
        MarketConfig cfg = spec.config();
        Rng stream(42 + iter);
        ParticipationDraw d = draw_participation(m, stream);
        FuturesOutcome book = run_oia3m(m, cfg);

        BaselineOutcome outs[5] = {
            run_conventional_s(m, cfg, d), run_conventional_f(m, cfg, book, d),
            run_quality_p(m, cfg, d), run_random_m(m, cfg, d, stream),
            run_negotiation(m, cfg, d)};
        for (const BaselineOutcome& out : outs)
            for (int i = 0; i < m.num_tasks(); ++i) {
                CHECK(out.task_outlay[i] <= cfg.to_units(m.tasks[i].budget));
                double quality = 0.0;
                for (int j : out.assignment[i]) {
                    CHECK(d.present(j));
                    quality += m.pair(i, j).quality;
                }
                CHECK(quality == doctest::Approx(out.realized_quality[i]));
            }
    }
}
