#include "mcsmarket.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mcs/harness.hpp"
#include "mcs/scenario.hpp"

struct mcs_engine {
    // The scenario is kept as text and reparsed on use, so option overrides
    // share the exact validation path of scenario files.
    std::string scenario_text;
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(mcs_engine* engine, Fn&& fn) {
    if (!engine) return MCS_ERR_INPUT;
    engine->last_error.clear();
    try {
        return fn();
    } catch (const mcs::InputError& e) {
        engine->last_error = e.what();
        return MCS_ERR_INPUT;
    } catch (const mcs::EngineError& e) {
        engine->last_error = e.what();
        return MCS_ERR_ENGINE;
    } catch (const std::exception& e) {
        engine->last_error = e.what();
        return MCS_ERR_ENGINE;
    }
}

mcs::ScenarioSpec current_spec(const mcs_engine* engine) {
    return mcs::parse_scenario(engine->scenario_text);
}

std::string sweep_point_label(const std::string& parameter, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return parameter + "=" + buf;
}

} // namespace

extern "C" {

int mcs_engine_create_default(mcs_engine** out) {
    if (!out) return MCS_ERR_INPUT;
    *out = new (std::nothrow) mcs_engine{};
    return *out ? MCS_OK : MCS_ERR_ENGINE;
}

int mcs_engine_create_from_file(const char* scenario_path, mcs_engine** out) {
    if (!out || !scenario_path) return MCS_ERR_INPUT;
    *out = nullptr;
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) return MCS_ERR_INPUT;
    std::ostringstream ss;
    ss << in.rdbuf();
    mcs_engine* engine = new (std::nothrow) mcs_engine{};
    if (!engine) return MCS_ERR_ENGINE;
    engine->scenario_text = ss.str();
    const int rc = guarded(engine, [&] {
        current_spec(engine); // validate now so errors surface at load time
        return MCS_OK;
    });
    if (rc != MCS_OK) {
        *out = engine; // keep it alive so the caller can read last_error
        return rc;
    }
    *out = engine;
    return MCS_OK;
}

void mcs_engine_destroy(mcs_engine* engine) { delete engine; }

int mcs_engine_set_option(mcs_engine* engine, const char* key, const char* value) {
    if (!engine || !key || !value) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        const std::string candidate =
            engine->scenario_text + "\n" + key + " = " + value + "\n";
        mcs::parse_scenario(candidate); // reject bad keys/values atomically
        engine->scenario_text = candidate;
        return MCS_OK;
    });
}

int mcs_engine_generate_market(mcs_engine* engine, unsigned long long seed, const char* out_dir) {
    if (!engine || !out_dir) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        const mcs::ScenarioSpec spec = current_spec(engine);
        mcs::Market market = mcs::generate_market(spec, seed);
        mcs::write_market_bundle(market, out_dir);
        return MCS_OK;
    });
}

int mcs_engine_ingest_trips(mcs_engine* engine, const char* csv_path, const char* out_dir) {
    if (!engine || !csv_path || !out_dir) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        std::ifstream in(csv_path, std::ios::binary);
        if (!in) throw mcs::InputError(std::string("cannot open trip file: ") + csv_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        const mcs::ScenarioSpec spec = current_spec(engine);
        mcs::Market market = mcs::ingest_trips(mcs::parse_trip_csv(ss.str()), spec);
        mcs::write_market_bundle(market, out_dir);
        return MCS_OK;
    });
}

int mcs_engine_run(mcs_engine* engine, char** trials_csv, char** aggregate_json,
                   char** summary_text) {
    if (!engine) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        const mcs::ScenarioSpec spec = current_spec(engine);
        const mcs::ExperimentResult result = mcs::run_experiment(spec);
        if (!result.rationality_violations.empty()) {
            engine->last_error = "settlement audit failed: " + result.rationality_violations[0];
            return MCS_ERR_PROPERTY;
        }
        if (trials_csv) *trials_csv = dup_string(mcs::format_trials_csv(result));
        if (aggregate_json) *aggregate_json = dup_string(mcs::format_aggregate_json(result));
        if (summary_text) *summary_text = dup_string(mcs::format_summary_table(result));
        return MCS_OK;
    });
}

int mcs_engine_sweep(mcs_engine* engine, const char* parameter, const double* grid, int grid_len,
                     char** sweep_json, char** summary_text) {
    if (!engine || !parameter || !grid || grid_len <= 0) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        const mcs::ScenarioSpec spec = current_spec(engine);
        const std::vector<double> grid_values(grid, grid + grid_len);
        const std::vector<mcs::ExperimentResult> results =
            mcs::run_sweep(spec, parameter, grid_values);

        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        std::string summary;
        for (std::size_t k = 0; k < results.size(); ++k) {
            if (!results[k].rationality_violations.empty()) {
                engine->last_error =
                    "settlement audit failed: " + results[k].rationality_violations[0];
                return MCS_ERR_PROPERTY;
            }
            nlohmann::ordered_json point;
            point["parameter"] = parameter;
            point["value"] = grid_values[k];
            point["result"] = nlohmann::ordered_json::parse(
                mcs::format_aggregate_json(results[k]));
            doc.push_back(point);
            summary += "--- " + sweep_point_label(parameter, grid_values[k]) + " ---\n";
            summary += mcs::format_summary_table(results[k]);
        }
        if (sweep_json) *sweep_json = dup_string(doc.dump(2) + "\n");
        if (summary_text) *summary_text = dup_string(summary);
        return MCS_OK;
    });
}

int mcs_engine_check_stability(mcs_engine* engine, int instances, unsigned long long seed,
                               int max_tasks, int max_workers, int inject_fault,
                               char** report_text) {
    if (!engine || instances < 0) return MCS_ERR_INPUT;
    return guarded(engine, [&] {
        mcs::StabilityBounds bounds;
        if (max_tasks > 0) bounds.max_tasks = max_tasks;
        if (max_workers > 0) bounds.max_workers = max_workers;
        if (bounds.max_tasks > 8 || bounds.max_workers > 12)
            throw mcs::InputError("stability bounds too large for exhaustive search");
        const mcs::StabilityRunReport report =
            mcs::run_stability_certification(instances, seed, bounds, inject_fault != 0);
        std::string text = "instances: " + std::to_string(report.instances) + "\n";
        text += "witnesses: " + std::to_string(report.witnesses.size()) + "\n";
        for (const std::string& w : report.witnesses) text += w + "\n";
        if (report_text) *report_text = dup_string(text);
        if (!report.ok()) {
            engine->last_error = report.witnesses[0];
            return MCS_ERR_PROPERTY;
        }
        return MCS_OK;
    });
}

const char* mcs_engine_last_error(const mcs_engine* engine) {
    return engine ? engine->last_error.c_str() : "";
}

const char* mcs_version(void) { return "mcsmarket 1.0.0"; }

void mcs_free_string(char* s) { std::free(s); }

} // extern "C"
