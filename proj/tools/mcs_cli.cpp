// Command-line front end. Deliberately talks to the engine only through the
// C interface, so it doubles as a smoke test of the shared library surface.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcsmarket.h"

namespace {

struct EngineHandle {
    mcs_engine* ptr = nullptr;
    ~EngineHandle() { mcs_engine_destroy(ptr); }
};

int fail(const mcs_engine* engine, int rc, const char* what) {
    const char* detail = mcs_engine_last_error(engine);
    std::fprintf(stderr, "error: %s%s%s\n", what, (detail && *detail) ? ": " : "",
                 (detail && *detail) ? detail : "");
    return rc;
}

int open_engine(const std::string& spec_path, EngineHandle& handle) {
    if (spec_path.empty()) return mcs_engine_create_default(&handle.ptr);
    return mcs_engine_create_from_file(spec_path.c_str(), &handle.ptr);
}

int apply_overrides(EngineHandle& handle, const std::string& methods, int trials,
                    long long seed, bool seed_set) {
    if (!methods.empty()) {
        int rc = mcs_engine_set_option(handle.ptr, "methods", methods.c_str());
        if (rc != MCS_OK) return rc;
    }
    if (trials > 0) {
        int rc = mcs_engine_set_option(handle.ptr, "trials", std::to_string(trials).c_str());
        if (rc != MCS_OK) return rc;
    }
    if (seed_set) {
        int rc = mcs_engine_set_option(handle.ptr, "master_seed", std::to_string(seed).c_str());
        if (rc != MCS_OK) return rc;
    }
    return MCS_OK;
}

bool write_file(const std::string& path, const char* content) {
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid futures/spot market simulator for crowdsensed services"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = ".", methods, parameter, grid_text, trips_path;
    int trials = 0, instances = 50, max_tasks = 0, max_workers = 0;
    long long seed = 0;
    bool inject_fault = false;

    CLI::App* gen = app.add_subcommand("gen", "Sample a market and write its CSV bundle");
    gen->add_option("--spec", spec_path, "Scenario file (key=value)");
    gen->add_option("--seed", seed, "Sampling seed")->required();
    gen->add_option("--out", out_dir, "Output directory");

    CLI::App* run = app.add_subcommand("run", "Run the Monte Carlo experiment");
    run->add_option("--spec", spec_path, "Scenario file (key=value)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--methods", methods, "Comma-separated method subset");
    run->add_option("--trials", trials, "Override trial count");
    CLI::Option* run_seed = run->add_option("--seed", seed, "Override master seed");

    CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per grid value");
    sweep->add_option("--spec", spec_path, "Scenario file (key=value)");
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--param", parameter,
                      "overbooking_rate | risk_tolerance | n_workers | n_tasks")
        ->required();
    sweep->add_option("--grid", grid_text, "Comma-separated values")->required();
    sweep->add_option("--methods", methods, "Comma-separated method subset");
    sweep->add_option("--trials", trials, "Override trial count");
    CLI::Option* sweep_seed = sweep->add_option("--seed", seed, "Override master seed");

    CLI::App* stability = app.add_subcommand("stability", "Certify stability on random instances");
    stability->add_option("--instances", instances, "Number of random instances");
    stability->add_option("--seed", seed, "Instance stream seed");
    stability->add_option("--max-tasks", max_tasks, "Search bound on tasks");
    stability->add_option("--max-workers", max_workers, "Search bound on workers");
    stability->add_flag("--inject-fault", inject_fault, "Corrupt one payment (self-test)")
        ->group(""); // hidden
    CLI::App* ingest = app.add_subcommand("ingest", "Build a market from trip records");
    ingest->add_option("--spec", spec_path, "Scenario file (key=value)");
    ingest->add_option("--trips", trips_path, "Trip CSV")->required();
    ingest->add_option("--out", out_dir, "Output directory");

    app.add_subcommand("version", "Print the engine version");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("version")) {
        std::printf("%s\n", mcs_version());
        return 0;
    }

    EngineHandle engine;
    int rc = open_engine(spec_path, engine);
    if (rc != MCS_OK) return fail(engine.ptr, rc, "cannot load scenario");

    if (app.got_subcommand("gen")) {
        rc = mcs_engine_generate_market(engine.ptr, static_cast<unsigned long long>(seed),
                                        out_dir.c_str());
        if (rc != MCS_OK) return fail(engine.ptr, rc, "market generation failed");
        std::printf("wrote %s/{tasks,workers,pairs}.csv\n", out_dir.c_str());
        return 0;
    }

    if (app.got_subcommand("ingest")) {
        rc = mcs_engine_ingest_trips(engine.ptr, trips_path.c_str(), out_dir.c_str());
        if (rc != MCS_OK) return fail(engine.ptr, rc, "trip ingestion failed");
        std::printf("wrote %s/{tasks,workers,pairs}.csv\n", out_dir.c_str());
        return 0;
    }

    if (app.got_subcommand("run")) {
        rc = apply_overrides(engine, methods, trials, seed, !run_seed->empty());
        if (rc != MCS_OK) return fail(engine.ptr, rc, "bad option");
        char* csv = nullptr;
        char* json = nullptr;
        char* summary = nullptr;
        rc = mcs_engine_run(engine.ptr, &csv, &json, &summary);
        if (rc != MCS_OK) return fail(engine.ptr, rc, "experiment failed");
        bool ok = write_file(out_dir + "/trials.csv", csv) &&
                  write_file(out_dir + "/aggregate.json", json);
        std::printf("%s", summary);
        mcs_free_string(csv);
        mcs_free_string(json);
        mcs_free_string(summary);
        if (!ok) return fail(engine.ptr, MCS_ERR_INPUT, "cannot write result files");
        std::printf("wrote %s/trials.csv and %s/aggregate.json\n", out_dir.c_str(),
                    out_dir.c_str());
        return 0;
    }

    if (app.got_subcommand("sweep")) {
        rc = apply_overrides(engine, methods, trials, seed, !sweep_seed->empty());
        if (rc != MCS_OK) return fail(engine.ptr, rc, "bad option");
        std::vector<double> grid;
        std::istringstream gs(grid_text);
        std::string tok;
        while (std::getline(gs, tok, ',')) {
            try {
                grid.push_back(std::stod(tok));
            } catch (const std::exception&) {
                std::fprintf(stderr, "error: bad grid value: %s\n", tok.c_str());
                return MCS_ERR_INPUT;
            }
        }
        char* json = nullptr;
        char* summary = nullptr;
        rc = mcs_engine_sweep(engine.ptr, parameter.c_str(), grid.data(),
                              static_cast<int>(grid.size()), &json, &summary);
        if (rc != MCS_OK) return fail(engine.ptr, rc, "sweep failed");
        bool ok = write_file(out_dir + "/sweep.json", json);
        std::printf("%s", summary);
        mcs_free_string(json);
        mcs_free_string(summary);
        if (!ok) return fail(engine.ptr, MCS_ERR_INPUT, "cannot write result files");
        std::printf("wrote %s/sweep.json\n", out_dir.c_str());
        return 0;
    }

    if (app.got_subcommand("stability")) {
        char* report = nullptr;
        rc = mcs_engine_check_stability(engine.ptr, instances,
                                        static_cast<unsigned long long>(seed), max_tasks,
                                        max_workers, inject_fault ? 1 : 0, &report);
        if (report) {
            std::printf("%s", report);
            mcs_free_string(report);
        }
        if (rc == MCS_ERR_PROPERTY) {
            std::fprintf(stderr, "error: stability violation found\n");
            return rc;
        }
        if (rc != MCS_OK) return fail(engine.ptr, rc, "stability check failed");
        return 0;
    }

    return 0;
}
