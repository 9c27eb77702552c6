#include "glp/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "glp/analytics.hpp"
#include "glp/community.hpp"
#include "glp/edge_io.hpp"
#include "glp/run.hpp"

namespace glp {

using nlohmann::json;

void EnsembleConfig::validate() const
{
    if (p_grid.empty()) {
        throw ConfigError("p grid is empty");
    }
    for (double p : p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ParameterError("p must lie in [0, 1], got " + format_double(p));
        }
    }
    if (steps == 0) {
        throw ParameterError("steps must be at least 1");
    }
    if (steps > kMaxSteps) {
        throw CapacityError("steps must be below 2^31 - 2");
    }
    if (replicas == 0) {
        throw ConfigError("replica count must be at least 1");
    }
    if (threads == 0) {
        throw ConfigError("thread count must be at least 1");
    }
    if (!(min_success_fraction >= 0.0 && min_success_fraction <= 1.0)) {
        throw ConfigError("min success fraction must lie in [0, 1]");
    }
    if (experiment.empty() || experiment.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("experiment name must be a plain file-name component");
    }
    ProcessParams probe;
    probe.steps = steps;
    probe.snapshot_times = effective_snapshots();
    probe.validate();
}

std::vector<Time> EnsembleConfig::effective_snapshots() const
{
    if (!snapshot_times.empty()) {
        return snapshot_times;
    }
    std::vector<Time> out;
    for (Time t = 10; t < steps; t *= 10) {
        out.push_back(t);
    }
    out.push_back(steps);
    return out;
}

double Accumulator::std_error() const noexcept
{
    if (count < 2) {
        return 0.0;
    }
    const auto n = static_cast<double>(count);
    const double m = sum / n;
    const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
}

std::vector<MetricRow> replica_metrics(const EnsembleConfig& config, double p, std::size_t replica)
{
    ProcessParams params;
    params.p = p;
    params.steps = config.steps;
    params.seed = replica_seed(config.base_seed, replica);
    params.snapshot_times = config.effective_snapshots();
    params.watched_vertices = {1};
    const RunResult result = run(params);

    std::vector<MetricRow> rows;
    const auto add = [&](Time t, const char* metric, double value) {
        rows.push_back({p, params.seed, replica, t, metric, value});
    };
    for (const Snapshot& s : result.snapshots) {
        add(s.t, "max_degree", static_cast<double>(s.max_degree));
        add(s.t, "vertex_count", static_cast<double>(s.vertex_count));
        add(s.t, "degree_v1", static_cast<double>(s.watched_degrees.front()));
    }
    const GlpGraph& g = result.graph;
    if (config.triangles) {
        add(g.t(), "triangles", static_cast<double>(count_triangles(g)));
    }
    if (config.clique) {
        add(g.t(), "clique_topk", static_cast<double>(max_clique_topk(g, config.clique_k).size()));
    }
    if (config.upper_bound) {
        add(g.t(), "upper_bound_violations", static_cast<double>(upper_bound_check(g, config.c1).size()));
    }
    if (config.power_law) {
        add(g.t(), "powerlaw_exponent", fit_power_law(degree_histogram(g), config.x_min).estimate);
    }
    return rows;
}

std::vector<AggregateRow> aggregate(std::span<const MetricRow> rows)
{
    std::vector<const MetricRow*> order;
    order.reserve(rows.size());
    for (const auto& r : rows) {
        order.push_back(&r);
    }
    std::sort(order.begin(), order.end(), [](const MetricRow* a, const MetricRow* b) {
        return std::tie(a->p, a->metric, a->t, a->seed) < std::tie(b->p, b->metric, b->t, b->seed);
    });
    std::vector<AggregateRow> out;
    std::size_t i = 0;
    while (i < order.size()) {
        Accumulator acc;
        std::size_t k = i;
        while (k < order.size() && order[k]->p == order[i]->p && order[k]->metric == order[i]->metric &&
               order[k]->t == order[i]->t) {
            acc.add(order[k]->value);
            ++k;
        }
        out.push_back({order[i]->p, order[i]->t, order[i]->metric, acc.mean(), acc.std_error(), acc.count});
        i = k;
    }
    return out;
}

EnsembleReport run_ensemble(const EnsembleConfig& config)
{
    config.validate();
    struct Task {
        double p;
        std::size_t replica;
    };
    std::vector<Task> tasks;
    for (double p : config.p_grid) {
        for (std::size_t r = 0; r < config.replicas; ++r) {
            tasks.push_back({p, r});
        }
    }
    std::vector<std::size_t> dispatch(tasks.size());
    std::iota(dispatch.begin(), dispatch.end(), std::size_t{0});
    if (config.permute_execution) {
        Rng rng(config.base_seed ^ 0x5eedULL);
        for (std::size_t i = dispatch.size(); i > 1; --i) {
            std::swap(dispatch[i - 1], dispatch[rng.below(i)]);
        }
    }

    std::vector<std::vector<MetricRow>> results(tasks.size());
    std::vector<std::optional<std::string>> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t n = next++; n < dispatch.size(); n = next++) {
            const std::size_t idx = dispatch[n];
            try {
                results[idx] = replica_metrics(config, tasks[idx].p, tasks[idx].replica);
            } catch (const std::exception& e) {
                errors[idx] = e.what();
            }
        }
    };
    const std::size_t width = std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(1, tasks.size()));
    if (width == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < width; ++w) {
            pool.emplace_back(worker);
        }
    }

    EnsembleReport report;
    report.config = config;
    report.attempted = tasks.size();
    for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
        if (errors[idx]) {
            report.failures.push_back({tasks[idx].p, replica_seed(config.base_seed, tasks[idx].replica),
                                       tasks[idx].replica, *errors[idx]});
        } else {
            std::move(results[idx].begin(), results[idx].end(), std::back_inserter(report.rows));
        }
    }
    const std::size_t succeeded = tasks.size() - report.failures.size();
    if (succeeded == 0) {
        throw StatisticsError("every replica failed; first error: " + report.failures.front().error);
    }
    report.aggregates = aggregate(report.rows);
    report.gate_passed = static_cast<double>(succeeded) >=
                         config.min_success_fraction * static_cast<double>(tasks.size()) - 1e-9;
    return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json config_to_json(const EnsembleConfig& c)
{
    return json{{"experiment", c.experiment},
                {"p_grid", c.p_grid},
                {"steps", c.steps},
                {"replicas", c.replicas},
                {"base_seed", c.base_seed},
                {"threads", c.threads},
                {"snapshot_times", c.snapshot_times},
                {"triangles", c.triangles},
                {"clique", c.clique},
                {"clique_k", c.clique_k},
                {"power_law", c.power_law},
                {"x_min", c.x_min},
                {"upper_bound", c.upper_bound},
                {"c1", c.c1},
                {"min_success_fraction", c.min_success_fraction},
                {"permute_execution", c.permute_execution}};
}

[[noreturn]] void field_error(const std::string& path, const std::string& what)
{
    throw ParseError("field '" + path + "': " + what);
}

const json& field(const json& obj, const std::string& path, const char* key)
{
    if (!obj.is_object()) {
        field_error(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(path.empty() ? key : path + "." + key, "missing");
    }
    return *it;
}

template <class T>
T get(const json& obj, const std::string& path, const char* key)
{
    const json& v = field(obj, path, key);
    const std::string where = path.empty() ? key : path + "." + key;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) {
                field_error(where, "expected a boolean");
            }
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!v.is_number()) {
                field_error(where, "expected a number");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (!v.is_number_unsigned()) {
                    field_error(where, "expected a non-negative integer");
                }
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                field_error(where, "expected a string");
            }
        }
        return v.get<T>();
    } catch (const json::exception& e) {
        field_error(where, e.what());
    }
}

EnsembleConfig config_from_json(const json& j, const std::string& path)
{
    EnsembleConfig c;
    c.experiment = get<std::string>(j, path, "experiment");
    c.p_grid = get<std::vector<double>>(j, path, "p_grid");
    c.steps = get<Time>(j, path, "steps");
    c.replicas = get<std::size_t>(j, path, "replicas");
    c.base_seed = get<std::uint64_t>(j, path, "base_seed");
    c.threads = get<std::size_t>(j, path, "threads");
    c.snapshot_times = get<std::vector<Time>>(j, path, "snapshot_times");
    c.triangles = get<bool>(j, path, "triangles");
    c.clique = get<bool>(j, path, "clique");
    c.clique_k = get<std::size_t>(j, path, "clique_k");
    c.power_law = get<bool>(j, path, "power_law");
    c.x_min = get<Degree>(j, path, "x_min");
    c.upper_bound = get<bool>(j, path, "upper_bound");
    c.c1 = get<double>(j, path, "c1");
    c.min_success_fraction = get<double>(j, path, "min_success_fraction");
    c.permute_execution = get<bool>(j, path, "permute_execution");
    return c;
}

const json& array_field(const json& obj, const char* key)
{
    const json& v = field(obj, "", key);
    if (!v.is_array()) {
        field_error(key, "expected an array");
    }
    return v;
}

}  // namespace

void write_report(const EnsembleReport& report, std::ostream& out)
{
    json j;
    j["schema"] = report.schema;
    json prov{{"version", report.version}};
    if (report.timestamp) {
        prov["timestamp"] = *report.timestamp;
    }
    j["provenance"] = prov;
    j["config"] = config_to_json(report.config);
    j["attempted"] = report.attempted;
    j["gate_passed"] = report.gate_passed;
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"p", r.p}, {"seed", r.seed}, {"replica", r.replica}, {"t", r.t}, {"metric", r.metric},
                        {"value", r.value}});
    }
    j["rows"] = std::move(rows);
    json aggs = json::array();
    for (const auto& a : report.aggregates) {
        aggs.push_back({{"p", a.p}, {"t", a.t}, {"metric", a.metric}, {"mean", a.mean},
                        {"stderr", a.std_error}, {"count", a.count}});
    }
    j["aggregates"] = std::move(aggs);
    json fails = json::array();
    for (const auto& f : report.failures) {
        fails.push_back({{"p", f.p}, {"seed", f.seed}, {"replica", f.replica}, {"error", f.error}});
    }
    j["failures"] = std::move(fails);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("failed writing report");
    }
}

void write_report(const EnsembleReport& report, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_report(report, out);
}

EnsembleReport read_report(std::istream& in)
{
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }

    EnsembleReport r;
    r.schema = get<std::string>(j, "", "schema");
    if (r.schema != kReportSchema) {
        field_error("schema", "unsupported schema '" + r.schema + "'");
    }
    const json& prov = field(j, "", "provenance");
    r.version = get<std::string>(prov, "provenance", "version");
    if (prov.contains("timestamp")) {
        r.timestamp = get<std::string>(prov, "provenance", "timestamp");
    }
    r.config = config_from_json(field(j, "", "config"), "config");
    r.attempted = get<std::size_t>(j, "", "attempted");
    r.gate_passed = get<bool>(j, "", "gate_passed");

    const json& rows = array_field(j, "rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string path = "rows[" + std::to_string(i) + "]";
        r.rows.push_back({get<double>(rows[i], path, "p"), get<std::uint64_t>(rows[i], path, "seed"),
                          get<std::size_t>(rows[i], path, "replica"), get<Time>(rows[i], path, "t"),
                          get<std::string>(rows[i], path, "metric"), get<double>(rows[i], path, "value")});
    }
    const json& aggs = array_field(j, "aggregates");
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        const std::string path = "aggregates[" + std::to_string(i) + "]";
        r.aggregates.push_back({get<double>(aggs[i], path, "p"), get<Time>(aggs[i], path, "t"),
                                get<std::string>(aggs[i], path, "metric"), get<double>(aggs[i], path, "mean"),
                                get<double>(aggs[i], path, "stderr"), get<std::size_t>(aggs[i], path, "count")});
    }
    const json& fails = array_field(j, "failures");
    for (std::size_t i = 0; i < fails.size(); ++i) {
        const std::string path = "failures[" + std::to_string(i) + "]";
        r.failures.push_back({get<double>(fails[i], path, "p"), get<std::uint64_t>(fails[i], path, "seed"),
                              get<std::size_t>(fails[i], path, "replica"),
                              get<std::string>(fails[i], path, "error")});
    }
    return r;
}

EnsembleReport read_report(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_report(in);
}

void write_rows_csv(std::span<const MetricRow> rows, std::ostream& out)
{
    out << "p,seed,replica,t,metric,value\n";
    for (const auto& r : rows) {
        out << format_double(r.p) << ',' << r.seed << ',' << r.replica << ',' << r.t << ',' << r.metric << ','
            << format_double(r.value) << '\n';
    }
}

std::string output_stem(const std::string& experiment, double p, Time steps)
{
    return experiment + "_" + format_double(p) + "_" + std::to_string(steps);
}

std::vector<std::string> write_outputs(const EnsembleReport& report, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> stems;
    for (double p : report.config.p_grid) {
        EnsembleReport part = report;
        part.config.p_grid = {p};
        std::erase_if(part.rows, [&](const MetricRow& r) { return r.p != p; });
        std::erase_if(part.aggregates, [&](const AggregateRow& a) { return a.p != p; });
        std::erase_if(part.failures, [&](const ReplicaFailure& f) { return f.p != p; });
        part.attempted = report.config.replicas;
        part.gate_passed = static_cast<double>(part.attempted - part.failures.size()) >=
                           part.config.min_success_fraction * static_cast<double>(part.attempted) - 1e-9;
        const std::string stem = output_stem(report.config.experiment, p, report.config.steps);
        write_report(part, (fs::path(dir) / (stem + ".json")).string());
        std::ofstream csv(fs::path(dir) / (stem + ".csv"), std::ios::binary);
        if (!csv) {
            throw std::runtime_error("cannot open csv output in " + dir);
        }
        write_rows_csv(part.rows, csv);
        stems.push_back(stem);
    }
    return stems;
}

}  // namespace glp
