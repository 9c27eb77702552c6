#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glp/analytics.hpp"
#include "glp/community.hpp"
#include "glp/edge_io.hpp"
#include "glp/ensemble.hpp"
#include "glp/hitting.hpp"
#include "glp/run.hpp"

namespace glp::cli {

using nlohmann::ordered_json;

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config") {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::map<std::string, std::string>& config)
{
    if (args.empty() || config.empty()) {
        return args;
    }
    std::vector<std::string> merged{args.front()};
    for (const auto& [key, value] : config) {
        merged.push_back("--" + key + "=" + value);
    }
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        T value{};
        std::istringstream is(item);
        is >> value;
        if (!is || !is.eof()) {
            throw ConfigError(std::string("bad ") + what + " list entry '" + item + "'");
        }
        out.push_back(value);
    }
    return out;
}

std::size_t default_threads()
{
    if (const char* env = std::getenv("GLP_THREADS"); env != nullptr && *env != '\0') {
        try {
            const long n = std::stol(env);
            if (n >= 1) {
                return static_cast<std::size_t>(n);
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("GLP_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

// Writes to `path`, or to `out` when path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write)
{
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write(f);
    if (!f) {
        throw std::runtime_error("failed writing " + path);
    }
}

void emit_json(const std::string& path, std::ostream& out, const ordered_json& j)
{
    emit(path, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

struct ModelFlags {
    double p = 0.5;
    Time steps = 1000;
    std::uint64_t seed = 0;

    void add_to(CLI::App* app)
    {
        app->add_option("--p", p, "edge/vertex-step probability p in [0,1]")->capture_default_str();
        app->add_option("--steps", steps, "number of process steps t")->capture_default_str();
        app->add_option("--seed", seed, "64-bit RNG seed")->capture_default_str();
    }
    void check() const
    {
        ProcessParams params;
        params.p = p;
        params.steps = steps;
        params.validate();
    }
    ordered_json echo() const { return {{"p", p}, {"steps", steps}, {"seed", seed}}; }
};

// ---------------------------------------------------------------- generate

struct GenerateCmd {
    ModelFlags model;
    std::string out_path;
    std::string snapshots;
    std::string watch;
    std::string snapshots_out;

    void add_to(CLI::App* app)
    {
        model.add_to(app);
        app->add_option("--out", out_path, "edge-list output path ('-' for stdout)")->required();
        app->add_option("--snapshots", snapshots, "comma-separated snapshot times");
        app->add_option("--watch", watch, "comma-separated vertex ids recorded at snapshots");
        app->add_option("--snapshots-out", snapshots_out, "CSV of snapshot rows");
    }

    int operator()(std::ostream& out) const
    {
        ProcessParams params;
        params.p = model.p;
        params.steps = model.steps;
        params.seed = model.seed;
        params.snapshot_times = parse_list<Time>(snapshots, "snapshot");
        params.watched_vertices = parse_list<VertexId>(watch, "vertex");
        params.validate();
        const RunResult result = run(params);
        emit(out_path, out, [&](std::ostream& o) { export_edges(result.graph, o); });
        if (!snapshots_out.empty()) {
            emit(snapshots_out, out, [&](std::ostream& o) {
                o << "t,max_degree,vertex_count";
                for (VertexId v : params.watched_vertices) {
                    o << ",deg_" << v;
                }
                o << '\n';
                for (const Snapshot& s : result.snapshots) {
                    o << s.t << ',' << s.max_degree << ',' << s.vertex_count;
                    for (Degree d : s.watched_degrees) {
                        o << ',' << d;
                    }
                    o << '\n';
                }
            });
        }
        return kOk;
    }
};

// ---------------------------------------------------------------- stats

struct StatsCmd {
    ModelFlags model;
    std::string in_path;
    double c1 = 4.0;
    Degree x_min = 10;
    bool triangles = false;
    std::string out_path;
    std::string csv_path;

    void add_to(CLI::App* app)
    {
        model.add_to(app);
        app->add_option("--in", in_path, "analyse an exported edge list instead of generating");
        app->add_option("--c1", c1, "upper-bound constant C1")->capture_default_str();
        app->add_option("--x-min", x_min, "power-law fit lower cutoff")->capture_default_str();
        app->add_flag("--triangles", triangles, "count triangles of the simple projection");
        app->add_option("--out", out_path, "JSON summary path ('-' for stdout)");
        app->add_option("--csv", csv_path, "per-fit CSV path");
    }

    int operator()(std::ostream& out) const
    {
        std::optional<GlpGraph> graph;
        if (!in_path.empty()) {
            graph.emplace(import_edges(in_path));
        } else {
            model.check();
            ProcessParams params;
            params.p = model.p;
            params.steps = model.steps;
            params.seed = model.seed;
            graph.emplace(run(params).graph);
        }
        const GlpGraph& g = *graph;
        const DerivedConstants dc = derived_constants(g.p());

        ordered_json j;
        ordered_json cfg = in_path.empty() ? model.echo() : ordered_json{{"in", in_path}};
        cfg["c1"] = c1;
        cfg["x_min"] = x_min;
        cfg["triangles"] = triangles;
        j["config"] = cfg;
        j["p"] = g.p();
        j["seed"] = g.seed();
        j["t"] = g.t();
        j["vertex_count"] = g.vertex_count();
        j["edge_count"] = g.edge_count();
        j["total_degree"] = g.total_degree();
        j["max_degree"] = g.max_degree();
        j["c_p"] = dc.c_p;
        j["triangle_exponent"] = dc.triangle_exponent;
        j["powerlaw_exponent_hint"] = dc.powerlaw_exponent_hint;

        std::vector<FitRow> fits;
        const DegreeHistogram hist = degree_histogram(g);
        try {
            const ExponentFit fit = fit_power_law(hist, x_min);
            j["power_law"] = {{"estimate", fit.estimate}, {"stderr", fit.std_error}, {"tail_samples", fit.sample_count}};
            fits.push_back({g.p(), g.seed(), g.t(), "powerlaw_exponent", fit.estimate, fit.std_error});
        } catch (const StatisticsError& e) {
            j["power_law"] = {{"error", e.what()}};
        }

        bool gate = true;
        if (g.t() >= 2) {
            const auto violators = upper_bound_check(g, c1);
            ordered_json first = ordered_json::array();
            for (std::size_t i = 0; i < std::min<std::size_t>(violators.size(), 20); ++i) {
                first.push_back(violators[i]);
            }
            j["upper_bound"] = {{"c1", c1}, {"violations", violators.size()}, {"first_violators", first}};
            gate = violators.empty();
        }
        if (triangles) {
            j["triangles"] = count_triangles(g);
        }
        j["gate_passed"] = gate;

        emit_json(out_path, out, j);
        if (!csv_path.empty()) {
            emit(csv_path, out, [&](std::ostream& o) { write_fit_csv(fits, o); });
        }
        return gate ? kOk : kGateFailed;
    }
};

// ---------------------------------------------------------------- hitting

struct HittingCmd {
    double p = 0.5;
    std::uint32_t m = 4;
    std::uint32_t j = 260;
    std::string k_list = "16";
    std::optional<double> gamma;
    std::size_t replicas = 10000;
    std::size_t dom_samples = 100000;
    std::uint64_t seed = 0;
    std::string grid = "256,512,1024,2048,4096,8192,16384";
    double sigmas = 3.0;
    std::string csv_path;
    std::string out_path;

    void add_to(CLI::App* app)
    {
        app->add_option("--p", p, "edge/vertex-step probability")->capture_default_str();
        app->add_option("--m", m, "block width")->capture_default_str();
        app->add_option("--j", j, "block index")->capture_default_str();
        app->add_option("--k", k_list, "comma-separated degree thresholds")->capture_default_str();
        app->add_option("--gamma", gamma, "exponent gamma in (0, 1/c_p - 1); default min(0.5, 0.9(1/c_p - 1))");
        app->add_option("--replicas", replicas, "process replicas")->capture_default_str();
        app->add_option("--dom-samples", dom_samples, "dominating-law samples")->capture_default_str();
        app->add_option("--seed", seed, "base seed")->capture_default_str();
        app->add_option("--grid", grid, "comma-separated survival grid times")->capture_default_str();
        app->add_option("--sigmas", sigmas, "allowed standard errors")->capture_default_str();
        app->add_option("--csv", csv_path, "hit-time samples CSV");
        app->add_option("--out", out_path, "JSON report path ('-' for stdout)");
    }

    int operator()(std::ostream& out) const
    {
        auto ks = parse_list<Degree>(k_list, "threshold");
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        const auto times = parse_list<Time>(grid, "grid");
        if (ks.empty() || times.empty() || !std::is_sorted(times.begin(), times.end())) {
            throw ConfigError("need at least one threshold and a sorted, non-empty grid");
        }
        if (replicas == 0 || dom_samples == 0) {
            throw ConfigError("replicas and dominating samples must be positive");
        }
        const double g = gamma.value_or(DominatingLawParams::default_gamma(p));
        std::vector<DominatingLawParams> laws;
        for (Degree k : ks) {
            DominatingLawParams law{p, m, j, k, g};
            check_domination_hypothesis(law);
            laws.push_back(law);
        }

        const Time until = times.back();
        const std::vector<BlockSpec> block{{j, m, ks}};
        std::vector<std::vector<std::optional<Time>>> empirical(ks.size());
        for (std::size_t r = 0; r < replicas; ++r) {
            const auto rec = track_blocks(p, replica_seed(seed, r), until, block).front();
            for (std::size_t i = 0; i < ks.size(); ++i) {
                empirical[i].push_back(rec.hit_times[i]);
            }
        }
        std::vector<std::vector<double>> dominating(ks.size());
        Rng rng(replica_seed(seed, replicas));
        for (std::size_t i = 0; i < ks.size(); ++i) {
            for (std::size_t s = 0; s < dom_samples; ++s) {
                dominating[i].push_back(sample_dominating(laws[i], rng));
            }
        }

        ordered_json j_out;
        j_out["config"] = {{"p", p},          {"m", m},        {"j", j},
                           {"k", ks},         {"gamma", g},    {"replicas", replicas},
                           {"dom_samples", dom_samples},       {"seed", seed},
                           {"grid", times},   {"sigmas", sigmas}};
        ordered_json results = ordered_json::array();
        bool all_hold = true;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const DominationReport rep = domination_test(laws[i], empirical[i], dominating[i], times, sigmas);
            all_hold = all_hold && rep.holds;
            ordered_json pts = ordered_json::array();
            for (const auto& pt : rep.points) {
                pts.push_back({{"t", pt.t},
                               {"empirical", pt.empirical},
                               {"dominating", pt.dominating},
                               {"joint_stderr", pt.joint_stderr},
                               {"holds", pt.holds}});
            }
            results.push_back({{"k", ks[i]}, {"holds", rep.holds}, {"points", pts}});
        }
        j_out["domination"] = results;
        j_out["gate_passed"] = all_hold;
        emit_json(out_path, out, j_out);

        if (!csv_path.empty()) {
            emit(csv_path, out, [&](std::ostream& o) {
                o << "source,p,m,j,k,replica,hit_time,censored\n";
                const std::string ptext = format_double(p);
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    for (std::size_t r = 0; r < empirical[i].size(); ++r) {
                        const auto& h = empirical[i][r];
                        o << "process," << ptext << ',' << m << ',' << j << ',' << ks[i] << ',' << r << ','
                          << (h ? std::to_string(*h) : std::to_string(until)) << ',' << (h ? 0 : 1) << '\n';
                    }
                    for (std::size_t s = 0; s < dominating[i].size(); ++s) {
                        o << "dominating," << ptext << ',' << m << ',' << j << ',' << ks[i] << ',' << s << ','
                          << format_double(dominating[i][s]) << ",0\n";
                    }
                }
            });
        }
        return all_hold ? kOk : kGateFailed;
    }
};

// ---------------------------------------------------------------- clique

struct CliqueCmd {
    CliqueExperimentConfig cfg;
    bool no_triangles = false;
    std::string out_path;

    void add_to(CLI::App* app)
    {
        app->add_option("--p", cfg.p, "edge/vertex-step probability")->capture_default_str();
        app->add_option("--steps", cfg.t, "reference time t; the graph is grown to 2t")->capture_default_str();
        app->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
        app->add_option("--m", cfg.m, "block width")->capture_default_str();
        app->add_option("--eps", cfg.eps, "clique exponent slack epsilon")->capture_default_str();
        app->add_option("--eps-prime", cfg.eps_prime, "lower block index exponent")->capture_default_str();
        app->add_option("--K", cfg.top_k, "top-degree candidates for the maximum clique")->capture_default_str();
        app->add_option("--pair-cap", cfg.pair_cap, "pairs checked exhaustively before sampling")
            ->capture_default_str();
        app->add_flag("--no-triangles", no_triangles, "skip triangle counting");
        app->add_option("--out", out_path, "JSON report path ('-' for stdout)");
    }

    int operator()(std::ostream& out)
    {
        cfg.triangles = !no_triangles;
        const CliqueExperimentReport r = clique_experiment(cfg);
        ordered_json j;
        j["config"] = {{"p", cfg.p},   {"steps", cfg.t},       {"seed", cfg.seed},       {"m", cfg.m},
                       {"eps", cfg.eps}, {"eps_prime", cfg.eps_prime}, {"K", cfg.top_k},
                       {"pair_cap", cfg.pair_cap}, {"triangles", cfg.triangles}};
        j["p"] = r.p;
        j["seed"] = r.seed;
        j["t"] = r.t;
        j["m"] = r.m;
        j["j_lo"] = r.j_lo;
        j["j_hi"] = r.j_hi;
        j["leader_count"] = r.leader_count;
        j["pair_fraction"] = r.pair_fraction;
        j["clique_size"] = r.clique_size;
        j["triangles"] = cfg.triangles ? ordered_json(r.triangles) : ordered_json(nullptr);
        j["alpha"] = r.alpha;
        j["beta"] = r.beta;
        j["leaders_above_beta"] = r.leaders_above_beta;
        j["missing_pairs"] = r.missing_pairs;
        j["sampled"] = r.sampled;
        emit_json(out_path, out, j);
        return kOk;
    }
};

// ---------------------------------------------------------------- ensemble

struct EnsembleCmd {
    EnsembleConfig cfg;
    std::string p_list = "0.5";
    std::string snapshots;
    std::optional<std::size_t> threads;
    std::string out_dir = ".";

    void add_to(CLI::App* app)
    {
        app->add_option("--p", p_list, "comma-separated p grid")->capture_default_str();
        app->add_option("--steps", cfg.steps, "steps per replica")->capture_default_str();
        app->add_option("--replicas", cfg.replicas, "replicas per p")->capture_default_str();
        app->add_option("--seed", cfg.base_seed, "base seed; replica r uses seed + r")->capture_default_str();
        app->add_option("--threads", threads, "worker threads (default: GLP_THREADS or 1)");
        app->add_option("--snapshots", snapshots, "comma-separated snapshot times (default: decades)");
        app->add_option("--experiment", cfg.experiment, "experiment name used in output file names")
            ->capture_default_str();
        app->add_flag("--triangles", cfg.triangles, "record triangle counts");
        app->add_flag("--clique", cfg.clique, "record the top-K maximum clique size");
        app->add_option("--K", cfg.clique_k, "top-degree candidates for --clique")->capture_default_str();
        app->add_flag("--power-law", cfg.power_law, "record the power-law tail exponent");
        app->add_option("--x-min", cfg.x_min, "power-law cutoff")->capture_default_str();
        app->add_flag("--upper-bound", cfg.upper_bound, "record upper-bound violations");
        app->add_option("--c1", cfg.c1, "upper-bound constant")->capture_default_str();
        app->add_option("--min-success", cfg.min_success_fraction, "required fraction of successful replicas")
            ->capture_default_str();
        app->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    }

    int operator()(std::ostream& out)
    {
        cfg.p_grid = parse_list<double>(p_list, "p");
        cfg.snapshot_times = parse_list<Time>(snapshots, "snapshot");
        cfg.threads = threads.value_or(default_threads());
        if (cfg.threads == 0) {
            throw ConfigError("--threads must be at least 1");
        }
        const EnsembleReport report = run_ensemble(cfg);
        for (const auto& stem : write_outputs(report, out_dir)) {
            out << stem << '\n';
        }
        return report.gate_passed ? kOk : kGateFailed;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"GLP preferential-attachment simulator and verification toolkit", "glp"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file; flags override it");
    };

    GenerateCmd generate;
    StatsCmd stats;
    HittingCmd hitting;
    CliqueCmd clique;
    EnsembleCmd ensemble;

    auto* gen_app = app.add_subcommand("generate", "generate a GLP graph and export its edge list");
    generate.add_to(gen_app);
    add_config(gen_app);
    auto* stats_app = app.add_subcommand("stats", "degree statistics, power-law fit and upper-bound check");
    stats.add_to(stats_app);
    add_config(stats_app);
    auto* hit_app = app.add_subcommand("hitting", "block hitting times against the dominating law");
    hitting.add_to(hit_app);
    add_config(hit_app);
    auto* clique_app = app.add_subcommand("clique", "leader connectivity and cliques in G_2t");
    clique.add_to(clique_app);
    add_config(clique_app);
    auto* ens_app = app.add_subcommand("ensemble", "seeded replica batches with aggregated reports");
    ensemble.add_to(ens_app);
    add_config(ens_app);

    try {
        std::vector<std::string> argv = args;
        // Locate --config before parsing so its entries can be spliced in.
        for (std::size_t i = 0; i < argv.size(); ++i) {
            std::string path;
            if (argv[i] == "--config" && i + 1 < argv.size()) {
                path = argv[i + 1];
            } else if (argv[i].starts_with("--config=")) {
                path = argv[i].substr(9);
            }
            if (!path.empty()) {
                argv = merge_config(argv, read_config_file(path));
                break;
            }
        }
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "glp: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "glp: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (gen_app->parsed()) {
            return generate(out);
        }
        if (stats_app->parsed()) {
            return stats(out);
        }
        if (hit_app->parsed()) {
            return hitting(out);
        }
        if (clique_app->parsed()) {
            return clique(out);
        }
        if (ens_app->parsed()) {
            return ensemble(out);
        }
    } catch (const std::exception& e) {
        err << "glp: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace glp::cli
