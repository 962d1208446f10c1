#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcs/model.hpp"
#include "mcs/rng.hpp"

using namespace mcs;

namespace {

Market tiny_market() {
    Market m;
    m.tasks.push_back({0, 30.0, 30.0, 1.0, 10.0});
    m.workers.push_back({0, 0.8, 0.3});
    m.pairs.push_back({3.0, 3.0, 6.0, 2.0, 1.0});
    return m;
}

bool has_code(const std::vector<ValidationError>& errors, ValidationCode code) {
    for (const auto& e : errors)
        if (e.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("validation accepts an in-range market") {
    CHECK(validate_market(tiny_market(), MarketConfig{}).empty());
}

TEST_CASE("validation reports payment below cost with indices") {
    Market m = tiny_market();
    m.pair(0, 0).desired_payment = 2.0;
    auto errors = validate_market(m, MarketConfig{});
    REQUIRE(has_code(errors, ValidationCode::PaymentBelowCost));
    for (const auto& e : errors)
        if (e.code == ValidationCode::PaymentBelowCost) {
            CHECK(e.task_index == 0);
            CHECK(e.worker_index == 0);
        }
}

TEST_CASE("validation reports dimension mismatch for a stale pair matrix") {
    Market m = tiny_market();
    m.workers.clear();
    auto errors = validate_market(m, MarketConfig{});
    CHECK(has_code(errors, ValidationCode::DimensionMismatch));
}

TEST_CASE("validation rejects degenerate participation probabilities") {
    Market m = tiny_market();
    m.workers[0].participation_prob = 0.0;
    CHECK(has_code(validate_market(m, MarketConfig{}), ValidationCode::BadProbability));
    m.workers[0].participation_prob = 1.0;
    CHECK(validate_market(m, MarketConfig{}).empty());
    m.workers[0].participation_prob = 1.5;
    CHECK(has_code(validate_market(m, MarketConfig{}), ValidationCode::BadProbability));
}

TEST_CASE("validation rejects nonpositive budget and quality") {
    Market m = tiny_market();
    m.tasks[0].budget = 0.0;
    m.pair(0, 0).quality = -1.0;
    auto errors = validate_market(m, MarketConfig{});
    CHECK(has_code(errors, ValidationCode::NonPositiveBudget));
    CHECK(has_code(errors, ValidationCode::NonPositiveQuality));
}

TEST_CASE("validation rejects a bad config") {
    MarketConfig cfg;
    cfg.payment_step = 0.0;
    CHECK(has_code(validate_market(tiny_market(), cfg), ValidationCode::BadConfig));
}

TEST_CASE("sure participants always show") {
    Market m = tiny_market();
    m.workers[0].participation_prob = 1.0;
    Rng rng(9);
    for (int k = 0; k < 200; ++k) CHECK(draw_participation(m, rng).present(0));
}

TEST_CASE("participation draws are seed-deterministic and unbiased") {
    Market m = tiny_market();
    m.workers[0].participation_prob = 0.5;
    Rng a(123), b(123);
    for (int k = 0; k < 100; ++k)
        CHECK(draw_participation(m, a).alpha == draw_participation(m, b).alpha);

    Rng c(7);
    int shows = 0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) shows += draw_participation(m, c).present(0) ? 1 : 0;
    CHECK(std::abs(shows / static_cast<double>(n) - 0.5) < 0.02);
}

TEST_CASE("expected quality sums a_j * q over the set") {
    Market m;
    m.tasks.push_back({0, 30.0, 30.0, 1.0, 10.0});
    m.workers.push_back({0, 0.8, 0.3});
    m.workers.push_back({1, 0.9, 0.3});
    m.pairs = {{20.0, 3.0, 6.0, 1.0, 1.0}, {15.0, 3.0, 6.0, 1.0, 1.0}};
    CHECK(expected_quality(m, 0, {}) == doctest::Approx(0.0));
    CHECK(expected_quality(m, 0, {0, 1}) == doctest::Approx(29.5));
    CHECK(expected_quality(m, 0, {0, 1}) > expected_quality(m, 0, {0}));
}

TEST_CASE("expected worker utility follows a*(p-c) and flags missing payments") {
    Market m = tiny_market();
    CHECK(expected_worker_utility(m, 0, {}, {}) == doctest::Approx(0.0));
    CHECK(expected_worker_utility(m, 0, {0}, {6.0}) == doctest::Approx(2.4));
    CHECK_THROWS_AS(expected_worker_utility(m, 0, {0}, {}), EngineError);
}

TEST_CASE("rng helpers are portable and deterministic") {
    Rng a(42), b(42);
    for (int k = 0; k < 64; ++k) CHECK(a.next_u64() == b.next_u64());

    Rng c(1);
    for (int k = 0; k < 1000; ++k) {
        double x = c.uniform(3.0, 6.0);
        CHECK(x >= 3.0);
        CHECK(x < 6.0);
        CHECK(c.next_below(7) < 7);
    }
    CHECK(Rng::derive(5, 0) != Rng::derive(5, 1));
    CHECK(Rng::derive(5, 0) == Rng::derive(5, 0));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
    Rng a(11), b(11);
    std::vector<int> u = v, w = v;
    a.shuffle(u);
    b.shuffle(w);
    CHECK(u == w);
    std::sort(u.begin(), u.end());
    CHECK(u == v);
}
