#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "mcsmarket.h"

namespace {

struct EngineGuard {
    mcs_engine* e = nullptr;
    ~EngineGuard() { mcs_engine_destroy(e); }
};

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { mcs_free_string(s); }
};

void shrink(mcs_engine* e) {
    REQUIRE(mcs_engine_set_option(e, "n_tasks", "2") == MCS_OK);
    REQUIRE(mcs_engine_set_option(e, "n_workers", "8") == MCS_OK);
    REQUIRE(mcs_engine_set_option(e, "trials", "4") == MCS_OK);
    REQUIRE(mcs_engine_set_option(e, "desired_quality_min", "2") == MCS_OK);
    REQUIRE(mcs_engine_set_option(e, "desired_quality_max", "10") == MCS_OK);
}

} // namespace

TEST_CASE("default engine construction and version string") {
    EngineGuard g;
    CHECK(mcs_engine_create_default(&g.e) == MCS_OK);
    REQUIRE(g.e != nullptr);
    CHECK(std::strlen(mcs_version()) > 0);
    CHECK(std::string(mcs_engine_last_error(g.e)).empty());
}

TEST_CASE("engine construction from a scenario file, missing file is an input error") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "mcs_capi_test";
    std::filesystem::create_directories(dir);
    const std::filesystem::path scenario = dir / "scenario.txt";
    std::ofstream(scenario) << "n_tasks = 4\nn_workers = 9\ntrials = 3\n";

    EngineGuard g;
    CHECK(mcs_engine_create_from_file(scenario.string().c_str(), &g.e) == MCS_OK);

    mcs_engine* missing = nullptr;
    CHECK(mcs_engine_create_from_file((dir / "absent.txt").string().c_str(), &missing) ==
          MCS_ERR_INPUT);
    CHECK(missing == nullptr);
}

TEST_CASE("option overrides validate atomically") {
    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    CHECK(mcs_engine_set_option(g.e, "trials", "5") == MCS_OK);
    CHECK(mcs_engine_set_option(g.e, "trials", "0") == MCS_ERR_INPUT);
    CHECK(std::strlen(mcs_engine_last_error(g.e)) > 0);
    CHECK(mcs_engine_set_option(g.e, "no_such_key", "1") == MCS_ERR_INPUT);
    // The failed overrides left the engine usable.
    CHECK(mcs_engine_set_option(g.e, "n_tasks", "1") == MCS_OK);
}

TEST_CASE("run produces the three report strings") {
    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    shrink(g.e);
    StringGuard csv, json, summary;
    REQUIRE(mcs_engine_run(g.e, &csv.s, &json.s, &summary.s) == MCS_OK);
    REQUIRE(csv.s != nullptr);
    REQUIRE(json.s != nullptr);
    REQUIRE(summary.s != nullptr);
    CHECK(std::string(csv.s).rfind("method,trial", 0) == 0);
    CHECK(std::string(json.s).find("\"hybrid\"") != std::string::npos);
    CHECK(std::string(summary.s).find("hybrid") != std::string::npos);

    // Null output pointers are allowed.
    CHECK(mcs_engine_run(g.e, nullptr, nullptr, nullptr) == MCS_OK);
}

TEST_CASE("market bundles are written where asked") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "mcs_capi_test" / "bundle";
    std::filesystem::remove_all(dir);

    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    shrink(g.e);
    REQUIRE(mcs_engine_generate_market(g.e, 12, dir.string().c_str()) == MCS_OK);
    CHECK(std::filesystem::exists(dir / "tasks.csv"));
    CHECK(std::filesystem::exists(dir / "workers.csv"));
    CHECK(std::filesystem::exists(dir / "pairs.csv"));
}

TEST_CASE("sweep rejects unknown parameters and accepts known ones") {
    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    shrink(g.e);
    const double grid[2] = {0.0, 0.2};
    StringGuard json, summary;
    CHECK(mcs_engine_sweep(g.e, "overbooking_rate", grid, 2, &json.s, &summary.s) == MCS_OK);
    REQUIRE(json.s != nullptr);
    CHECK(std::string(json.s).find("overbooking_rate") != std::string::npos);
    CHECK(mcs_engine_sweep(g.e, "gravity", grid, 2, nullptr, nullptr) == MCS_ERR_INPUT);
}

TEST_CASE("stability certification passes clean and flags the planted fault") {
    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    StringGuard clean_report, fault_report;
    CHECK(mcs_engine_check_stability(g.e, 5, 7, 8, 10, 0, &clean_report.s) == MCS_OK);
    REQUIRE(clean_report.s != nullptr);
    CHECK(mcs_engine_check_stability(g.e, 2, 7, 8, 10, 1, &fault_report.s) == MCS_ERR_PROPERTY);
    REQUIRE(fault_report.s != nullptr);
    CHECK(std::strlen(fault_report.s) > 0);

    // Bounds past what the exhaustive search can honor are input errors.
    CHECK(mcs_engine_check_stability(g.e, 1, 7, 40, 40, 0, nullptr) == MCS_ERR_INPUT);
}

TEST_CASE("trip ingestion through the C surface") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "mcs_capi_test";
    std::filesystem::create_directories(dir);
    const std::filesystem::path csv = dir / "trips.csv";
    std::ofstream(csv) << "worker_id,active_days,trip_km,pickup_km,dropoff_km\n"
                       << "0,20,12.5,1.0,2.0\n"
                       << "1,31,30.0,6.0,3.0\n";
    EngineGuard g;
    REQUIRE(mcs_engine_create_default(&g.e) == MCS_OK);
    shrink(g.e);
    const std::filesystem::path out = dir / "ingested";
    std::filesystem::remove_all(out);
    CHECK(mcs_engine_ingest_trips(g.e, csv.string().c_str(), out.string().c_str()) == MCS_OK);
    CHECK(std::filesystem::exists(out / "workers.csv"));
    CHECK(mcs_engine_ingest_trips(g.e, (dir / "absent.csv").string().c_str(),
                                  out.string().c_str()) == MCS_ERR_INPUT);
}
