#include "mcs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace mcs {

namespace {

double quantize(double x, double grid) { return std::round(x / grid) * grid; }

double affine(double x, double lo, double hi, const Range& target) {
    if (hi - lo < 1e-12) return 0.5 * (target.lo + target.hi);
    return target.lo + (x - lo) / (hi - lo) * (target.hi - target.lo);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v))
            throw InputError("bad numeric value for key '" + key + "': " + value);
        return v;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("bad numeric value for key '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw InputError("bad integer value for key '" + key + "': " + value);
        return v;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("bad integer value for key '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InputError("bad boolean value for key '" + key + "': " + value);
}

void fmt(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Hybrid: return "hybrid";
        case Method::ConventionalS: return "conventional_s";
        case Method::ConventionalF: return "conventional_f";
        case Method::QualityP: return "quality_p";
        case Method::RandomM: return "random_m";
        case Method::Negotiation: return "negotiation";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::Hybrid, Method::ConventionalS, Method::ConventionalF,
                     Method::QualityP, Method::RandomM, Method::Negotiation})
        if (name == method_name(m)) return m;
    throw InputError("unknown method: " + name);
}

MarketConfig ScenarioSpec::config() const {
    MarketConfig c;
    c.overbooking_rate = overbooking_rate;
    c.payment_step = payment_step;
    c.risk_tolerance = risk_tolerance;
    c.money_scale = money_scale;
    return c;
}

void ScenarioSpec::validate() const {
    auto check_range = [](const char* name, const Range& r) {
        if (!(std::isfinite(r.lo) && std::isfinite(r.hi)) || r.lo > r.hi)
            throw InputError(std::string("range '") + name + "' is empty or unordered");
    };
    check_range("cost", cost);
    check_range("payment", payment);
    check_range("quality", quality);
    check_range("budget", budget);
    check_range("desired_quality", desired_quality);
    check_range("risk_scale", risk_scale);
    check_range("participation", participation);
    check_range("uplink_ms", uplink_ms);
    check_range("downlink_ms", downlink_ms);
    check_range("worker_power", worker_power);
    check_range("task_power", task_power);
    if (n_tasks < 0 || n_workers < 0) throw InputError("negative task or worker count");
    if (trials < 1) throw InputError("trials must be at least 1");
    if (payment.hi < cost.lo)
        throw InputError("infeasible ranges: maximum payment below minimum cost");
    if (participation.lo <= 0.0 || participation.hi > 1.0)
        throw InputError("participation range must lie in (0, 1]");
    if (quality.lo <= 0.0) throw InputError("quality range must be positive");
    if (budget.lo <= 0.0) throw InputError("budget range must be positive");
    if (cost.lo <= 0.0) throw InputError("cost range must be positive");
    if (risk_scale.lo < 1.0) throw InputError("risk_scale must be at least 1");
    if (risk_tolerance <= 0.0 || risk_tolerance > 1.0)
        throw InputError("risk_tolerance must lie in (0, 1]");
    if (overbooking_rate < 0.0) throw InputError("overbooking_rate must be nonnegative");
    if (payment_step <= 0.0) throw InputError("payment_step must be positive");
    if (money_scale < 1) throw InputError("money_scale must be at least 1");
    if (methods.empty()) throw InputError("at least one method is required");
}

ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw InputError("line " + std::to_string(line_no) + ": empty key or value");

        if (key == "n_tasks") spec.n_tasks = static_cast<int>(parse_int(key, value));
        else if (key == "n_workers") spec.n_workers = static_cast<int>(parse_int(key, value));
        else if (key == "trials") spec.trials = static_cast<int>(parse_int(key, value));
        else if (key == "master_seed")
            spec.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "methods") {
            spec.methods.clear();
            std::istringstream ms(value);
            std::string tok;
            while (std::getline(ms, tok, ','))
                spec.methods.push_back(method_from_name(trim(tok)));
        } else if (key == "cost_min") spec.cost.lo = parse_double(key, value);
        else if (key == "cost_max") spec.cost.hi = parse_double(key, value);
        else if (key == "payment_min") spec.payment.lo = parse_double(key, value);
        else if (key == "payment_max") spec.payment.hi = parse_double(key, value);
        else if (key == "quality_min") spec.quality.lo = parse_double(key, value);
        else if (key == "quality_max") spec.quality.hi = parse_double(key, value);
        else if (key == "budget_min") spec.budget.lo = parse_double(key, value);
        else if (key == "budget_max") spec.budget.hi = parse_double(key, value);
        else if (key == "desired_quality_min") spec.desired_quality.lo = parse_double(key, value);
        else if (key == "desired_quality_max") spec.desired_quality.hi = parse_double(key, value);
        else if (key == "risk_scale_min") spec.risk_scale.lo = parse_double(key, value);
        else if (key == "risk_scale_max") spec.risk_scale.hi = parse_double(key, value);
        else if (key == "participation_min") spec.participation.lo = parse_double(key, value);
        else if (key == "participation_max") spec.participation.hi = parse_double(key, value);
        else if (key == "uplink_ms_min") spec.uplink_ms.lo = parse_double(key, value);
        else if (key == "uplink_ms_max") spec.uplink_ms.hi = parse_double(key, value);
        else if (key == "downlink_ms_min") spec.downlink_ms.lo = parse_double(key, value);
        else if (key == "downlink_ms_max") spec.downlink_ms.hi = parse_double(key, value);
        else if (key == "worker_power_min") spec.worker_power.lo = parse_double(key, value);
        else if (key == "worker_power_max") spec.worker_power.hi = parse_double(key, value);
        else if (key == "task_power_min") spec.task_power.lo = parse_double(key, value);
        else if (key == "task_power_max") spec.task_power.hi = parse_double(key, value);
        else if (key == "risk_tolerance") spec.risk_tolerance = parse_double(key, value);
        else if (key == "overbooking_rate") spec.overbooking_rate = parse_double(key, value);
        else if (key == "payment_step") spec.payment_step = parse_double(key, value);
        else if (key == "money_scale") spec.money_scale = static_cast<int>(parse_int(key, value));
        else if (key == "resample_market") spec.resample_market = parse_bool(key, value);
        else
            throw InputError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    spec.validate();
    return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

Market generate_market(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    Market m;
    m.tasks.resize(spec.n_tasks);
    m.workers.resize(spec.n_workers);
    m.pairs.resize(static_cast<std::size_t>(spec.n_tasks) * spec.n_workers);

    for (int i = 0; i < spec.n_tasks; ++i) {
        Task& t = m.tasks[i];
        t.id = i;
        t.budget = quantize(rng.uniform(spec.budget.lo, spec.budget.hi), 0.1);
        t.desired_quality = rng.uniform(spec.desired_quality.lo, spec.desired_quality.hi);
        t.risk_scale = rng.uniform(spec.risk_scale.lo, spec.risk_scale.hi);
        t.tx_power = rng.uniform(spec.task_power.lo, spec.task_power.hi);
    }
    for (int j = 0; j < spec.n_workers; ++j) {
        Worker& w = m.workers[j];
        w.id = j;
        w.participation_prob =
            quantize(rng.uniform(spec.participation.lo, spec.participation.hi), 1e-4);
        w.tx_power = rng.uniform(spec.worker_power.lo, spec.worker_power.hi);
    }
    for (int i = 0; i < spec.n_tasks; ++i) {
        for (int j = 0; j < spec.n_workers; ++j) {
            PairData& p = m.pair(i, j);
            p.quality = rng.uniform(spec.quality.lo, spec.quality.hi);
            p.cost = quantize(rng.uniform(spec.cost.lo, spec.cost.hi), 0.1);
            p.desired_payment =
                std::max(quantize(rng.uniform(spec.payment.lo, spec.payment.hi), 0.1), p.cost);
            p.uplink_latency_ms = rng.uniform(spec.uplink_ms.lo, spec.uplink_ms.hi);
            p.downlink_latency_ms = rng.uniform(spec.downlink_ms.lo, spec.downlink_ms.hi);
        }
    }
    return m;
}

std::vector<TripRecord> parse_trip_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty trip file");
    if (trim(line) != "worker_id,active_days,trip_km,pickup_km,dropoff_km")
        throw InputError("bad trip CSV header: " + trim(line));

    std::vector<TripRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 5)
            throw InputError("line " + std::to_string(line_no) + ": expected 5 fields");
        TripRecord r;
        r.worker_id = static_cast<int>(parse_int("worker_id", fields[0]));
        r.active_days = static_cast<int>(parse_int("active_days", fields[1]));
        r.trip_km = parse_double("trip_km", fields[2]);
        r.pickup_km = parse_double("pickup_km", fields[3]);
        r.dropoff_km = parse_double("dropoff_km", fields[4]);
        if (r.active_days < 0 || r.active_days > 31)
            throw InputError("line " + std::to_string(line_no) + ": active_days outside [0, 31]");
        if (r.trip_km < 0 || r.pickup_km < 0 || r.dropoff_km < 0)
            throw InputError("line " + std::to_string(line_no) + ": negative distance");
        records.push_back(r);
    }
    return records;
}

Market ingest_trips(const std::vector<TripRecord>& records, const ScenarioSpec& spec) {
    if (records.empty()) throw InputError("no trip records");
    for (const TripRecord& r : records)
        if (!(std::isfinite(r.trip_km) && std::isfinite(r.pickup_km) &&
              std::isfinite(r.dropoff_km)))
            throw InputError("non-finite distance in trip records");

    // Group by worker id, preserving first-appearance order.
    std::vector<int> worker_ids;
    std::map<int, std::vector<const TripRecord*>> by_worker;
    for (const TripRecord& r : records) {
        auto [it, fresh] = by_worker.try_emplace(r.worker_id);
        if (fresh) worker_ids.push_back(r.worker_id);
        it->second.push_back(&r);
    }
    const int n_workers = static_cast<int>(worker_ids.size());
    const int n_tasks = spec.n_tasks;

    // Raw signals: travel burden drives cost, proximity drives quality.
    constexpr double kEps = 1e-6; // km; guards the inverse-distance quality
    double burden_lo = 1e300, burden_hi = -1e300;
    double prox_lo = 1e300, prox_hi = -1e300;
    double pickup_lo = 1e300, pickup_hi = -1e300;
    for (const TripRecord& r : records) {
        const double burden = r.trip_km + r.pickup_km + r.dropoff_km;
        const double prox = 1.0 / (r.pickup_km + r.dropoff_km + kEps);
        burden_lo = std::min(burden_lo, burden);
        burden_hi = std::max(burden_hi, burden);
        prox_lo = std::min(prox_lo, prox);
        prox_hi = std::max(prox_hi, prox);
        pickup_lo = std::min(pickup_lo, r.pickup_km);
        pickup_hi = std::max(pickup_hi, r.pickup_km);
    }

    Rng rng(spec.master_seed);
    Market m;
    m.tasks.resize(n_tasks);
    m.workers.resize(n_workers);
    m.pairs.resize(static_cast<std::size_t>(n_tasks) * n_workers);

    for (int i = 0; i < n_tasks; ++i) {
        Task& t = m.tasks[i];
        t.id = i;
        t.budget = quantize(rng.uniform(spec.budget.lo, spec.budget.hi), 0.1);
        t.desired_quality = rng.uniform(spec.desired_quality.lo, spec.desired_quality.hi);
        t.risk_scale = rng.uniform(spec.risk_scale.lo, spec.risk_scale.hi);
        t.tx_power = rng.uniform(spec.task_power.lo, spec.task_power.hi);
    }
    for (int j = 0; j < n_workers; ++j) {
        Worker& w = m.workers[j];
        w.id = j;
        w.participation_prob = by_worker[worker_ids[j]].front()->active_days / 31.0;
        if (w.participation_prob <= 0.0)
            throw InputError("worker " + std::to_string(worker_ids[j]) + " has zero active days");
        w.tx_power = rng.uniform(spec.worker_power.lo, spec.worker_power.hi);
    }
    for (int i = 0; i < n_tasks; ++i) {
        for (int j = 0; j < n_workers; ++j) {
            const auto& recs = by_worker[worker_ids[j]];
            const TripRecord& r = *recs[static_cast<std::size_t>(i) % recs.size()];
            const double burden = r.trip_km + r.pickup_km + r.dropoff_km;
            const double prox = 1.0 / (r.pickup_km + r.dropoff_km + kEps);
            PairData& p = m.pair(i, j);
            p.cost = quantize(affine(burden, burden_lo, burden_hi, spec.cost), 0.1);
            p.quality = affine(prox, prox_lo, prox_hi, spec.quality);
            p.desired_payment =
                std::max(quantize(affine(p.cost, spec.cost.lo, spec.cost.hi, spec.payment), 0.1),
                         p.cost);
            p.uplink_latency_ms = affine(r.pickup_km, pickup_lo, pickup_hi, spec.uplink_ms);
            p.downlink_latency_ms = affine(r.pickup_km, pickup_lo, pickup_hi, spec.downlink_ms);
        }
    }
    return m;
}

void write_market_bundle(const Market& market, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::string out = "task_id,budget,desired_quality,risk_scale,tx_power\n";
        for (const Task& t : market.tasks) {
            out += std::to_string(t.id);
            out += ',';
            fmt(out, t.budget);
            out += ',';
            fmt(out, t.desired_quality);
            out += ',';
            fmt(out, t.risk_scale);
            out += ',';
            fmt(out, t.tx_power);
            out += '\n';
        }
        std::ofstream f(dir + "/tasks.csv", std::ios::binary);
        if (!f) throw InputError("cannot write " + dir + "/tasks.csv");
        f << out;
    }
    {
        std::string out = "worker_id,participation_prob,tx_power\n";
        for (const Worker& w : market.workers) {
            out += std::to_string(w.id);
            out += ',';
            fmt(out, w.participation_prob);
            out += ',';
            fmt(out, w.tx_power);
            out += '\n';
        }
        std::ofstream f(dir + "/workers.csv", std::ios::binary);
        if (!f) throw InputError("cannot write " + dir + "/workers.csv");
        f << out;
    }
    {
        std::string out =
            "task_id,worker_id,quality,cost,desired_payment,uplink_latency_ms,downlink_latency_ms\n";
        for (int i = 0; i < market.num_tasks(); ++i) {
            for (int j = 0; j < market.num_workers(); ++j) {
                const PairData& p = market.pair(i, j);
                out += std::to_string(i);
                out += ',';
                out += std::to_string(j);
                out += ',';
                fmt(out, p.quality);
                out += ',';
                fmt(out, p.cost);
                out += ',';
                fmt(out, p.desired_payment);
                out += ',';
                fmt(out, p.uplink_latency_ms);
                out += ',';
                fmt(out, p.downlink_latency_ms);
                out += '\n';
            }
        }
        std::ofstream f(dir + "/pairs.csv", std::ios::binary);
        if (!f) throw InputError("cannot write " + dir + "/pairs.csv");
        f << out;
    }
}

} // namespace mcs
