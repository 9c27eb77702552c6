// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any gated criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "glp/analytics.hpp"
#include "glp/community.hpp"
#include "glp/hitting.hpp"
#include "glp/run.hpp"

namespace {

using namespace glp;

struct Outcome {
    bool pass = false;
    std::string detail;
    bool gated = true;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

GlpGraph build_five_vertex()
{
    // Degrees (10, 1, 2, 3, 4) at t = 9.
    GlpGraph g(0.5);
    const std::pair<VertexId, VertexId> edges[] = {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 3},
                                                   {1, 4}, {4, 5}, {1, 5}, {1, 5}};
    for (const auto& [u, v] : edges) {
        StepOutcome o;
        o.u = u;
        o.v = v;
        if (v == g.vertex_count() + 1) {
            o.kind = StepKind::vertex;
            o.new_vertex = v;
        }
        g.apply(o);
    }
    return g;
}

Outcome conservation()
{
    constexpr Time kT = 100000;
    std::string detail;
    bool ok = true;
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        GlpGraph g(p, 1);
        Rng rng(1);
        std::size_t vertex_steps = 0;
        advance(g, rng, kT, [&](const GlpGraph&, const StepOutcome& o) {
            vertex_steps += o.kind == StepKind::vertex ? 1 : 0;
        });
        const auto deg = g.degrees();
        const Degree sum = std::accumulate(deg.begin(), deg.end(), Degree{0});
        const bool good = sum == 2 * (kT + 1) && g.endpoints().size() == 2 * (kT + 1) &&
                          g.vertex_count() == 1 + vertex_steps && g.total_degree() == sum;
        ok = ok && good;
        detail += fmt("p=%.2f:%s ", p, good ? "ok" : "BAD");
    }
    return {ok, detail};
}

Outcome sampling_exactness()
{
    const GlpGraph g = build_five_vertex();
    Rng rng(2);
    constexpr int kDraws = 1000000;
    std::vector<double> counts(6, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        counts[sample_endpoint(g, rng)] += 1.0;
    }
    const double exact[] = {0, 10, 1, 2, 3, 4};
    double tv = 0;
    for (int v = 1; v <= 5; ++v) {
        tv += std::abs(counts[v] / kDraws - exact[v] / 20.0);
    }
    tv /= 2;
    return {tv < 0.005, fmt("TV=%.5f (< 0.005)", tv)};
}

Outcome drift_identity()
{
    GlpGraph g(0.5, 3);
    Rng rng(3);
    advance(g, rng, 1000);
    const std::vector<VertexId> tracked{1, 2, 5, 20, static_cast<VertexId>(g.vertex_count() / 2)};
    Rng trial_rng(33);
    const auto est = drift_check(g, tracked, 1000000, trial_rng);
    double worst = 0;
    for (const auto& e : est) {
        worst = std::max(worst, std::abs(e.z));
    }
    return {worst < 3.0, fmt("max |z| over 5 vertices = %.3f (< 3)", worst)};
}

Outcome martingale()
{
    const std::vector<Time> checkpoints{100, 1000, 10000};
    double worst = 0;
    std::string detail;
    for (double p : {0.5, 0.75}) {
        const auto rep = martingale_check(p, checkpoints, 10000, 4000);
        worst = std::max(worst, rep.max_relative_drift);
        detail += fmt("p=%.2f max rel drift %.4f; ", p, rep.max_relative_drift);
    }
    return {worst <= 0.03, detail + "(<= 0.03)"};
}

Outcome max_degree_exponent()
{
    ProcessParams params;
    params.steps = 1000000;
    params.snapshot_times = {10000, 100000, 1000000};
    params.p = 0.5;
    std::vector<std::vector<Snapshot>> reps;
    for (std::uint64_t s = 0; s < 20; ++s) {
        params.seed = 500 + s;
        reps.push_back(run(params).snapshots);
    }
    // A two-decade span is required by max_degree_series; the three
    // snapshot times above satisfy it.
    const auto slope = fit_exponent(max_degree_series(reps)).estimate;

    params.p = 0.0;
    params.seed = 77;
    const auto zero = run(params).snapshots;
    bool exact = true;
    for (const auto& s : zero) {
        exact = exact && s.max_degree == 2 * (s.t + 1);
    }
    const std::vector<std::vector<Snapshot>> zero_reps{zero};
    const double zero_slope = fit_exponent(max_degree_series(zero_reps)).estimate;
    const bool ok = slope >= 0.70 && slope <= 0.80 && exact && std::abs(zero_slope - 1.0) < 1e-4;
    return {ok, fmt("p=0.5 slope %.4f in [0.70, 0.80]; p=0 max degree = 2(t+1) %s, slope %.6f", slope,
                    exact ? "exactly" : "NOT", zero_slope)};
}

Outcome upper_bound()
{
    std::size_t violations = 0;
    for (double p : {0.25, 0.5, 0.75}) {
        for (std::uint64_t s = 0; s < 50; ++s) {
            GlpGraph g(p, 600 + s);
            Rng rng(600 + s);
            advance(g, rng, 100000);
            violations += upper_bound_check(g, 4.0).size();
        }
    }
    return {violations == 0, fmt("%zu violating vertices over 150 runs", violations)};
}

// Exponential-product law evaluated directly from its rate formula, so any
// gamma can be used.
double dominating_sample_raw(double p, std::uint32_t m, std::uint32_t j, Degree k, double gamma, Rng& rng)
{
    const double c = 1.0 - p / 2.0;
    double sum = 0;
    for (Degree i = m; i < k; ++i) {
        const double delta = (1.0 - p) / (2.0 * (2.0 - p) * std::pow(static_cast<double>(i), gamma));
        sum += rng.exponential(c * (1.0 - delta) * static_cast<double>(i));
    }
    return static_cast<double>(sample_arrival(j, m, p, rng)) * std::exp(sum);
}

Outcome hitting_domination()
{
    constexpr double kP = 0.5;
    constexpr std::uint32_t kM = 4;
    constexpr std::uint32_t kJ = 260;
    constexpr Degree kK = 16;
    std::vector<Time> grid;
    for (Time t = 256; t <= 16384; t *= 2) {
        grid.push_back(t);
    }
    const std::vector<BlockSpec> block{{kJ, kM, {kK}}};
    std::vector<std::optional<Time>> empirical;
    empirical.reserve(10000);
    for (std::uint64_t r = 0; r < 10000; ++r) {
        empirical.push_back(track_blocks(kP, 7000 + r, grid.back(), block).front().hit_times[0]);
    }
    const auto emp = survival_curve(empirical, grid);

    // The stated gamma = 0.4 lies above the admissible range (0, 1/3) at
    // p = 0.5. Larger gamma gives larger rates and a stochastically smaller
    // dominating variable, so it is the stricter comparison.
    Rng rng(99);
    std::vector<double> dom04(100000);
    for (auto& x : dom04) {
        x = dominating_sample_raw(kP, kM, kJ, kK, 0.4, rng);
    }
    const auto dom = survival_curve(dom04, grid);
    bool strict_ok = true;
    double worst_margin = 1e9;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double se = std::hypot(emp[g].std_error, dom[g].std_error);
        const double margin = dom[g].survival + 3 * se - emp[g].survival;
        worst_margin = std::min(worst_margin, margin);
        strict_ok = strict_ok && margin >= 0;
    }

    DominatingLawParams law{kP, kM, kJ, kK, DominatingLawParams::default_gamma(kP)};
    Rng rng2(100);
    std::vector<double> dom_default(100000);
    for (auto& x : dom_default) {
        x = sample_dominating(law, rng2);
    }
    const auto report = domination_test(law, empirical, dom_default, grid, 3.0);
    return {strict_ok && report.holds,
            fmt("gamma=0.4: worst margin %.4f (>= 0); library law gamma=%.3f holds=%s", worst_margin, law.gamma,
                report.holds ? "yes" : "no")};
}

Outcome arrival_moments()
{
    constexpr std::uint32_t kJ = 50;
    constexpr std::uint32_t kM = 4;
    constexpr double kP = 0.5;
    constexpr int kN = 1000000;
    Rng rng(8);
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < kN; ++i) {
        const auto x = static_cast<double>(sample_arrival(kJ, kM, kP, rng));
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    const double m1 = s1 / kN;
    const double m2 = s2 / kN;
    const double se1 = std::sqrt((m2 - m1 * m1) / kN);
    const double se2 = std::sqrt((s4 / kN - m2 * m2) / kN);
    const double z1 = (m1 - arrival_mean(kJ, kM, kP)) / se1;
    const double z2 = (m2 - arrival_second_moment(kJ, kM, kP)) / se2;

    // Simulator: vertex j arrives after j - 1 vertex-steps.
    double worst_sim = 0;
    for (VertexId j : {10u, 100u, 1000u}) {
        constexpr int kReps = 5000;
        double a1 = 0, a2 = 0;
        for (int r = 0; r < kReps; ++r) {
            GlpGraph g(kP, 9000 + r);
            Rng rr(9000 + r);
            while (g.vertex_count() < j) {
                step(g, rr);
            }
            const auto a = static_cast<double>(g.arrival_time(j));
            a1 += a;
            a2 += a * a;
        }
        const double mean = a1 / kReps;
        const double se = std::sqrt((a2 / kReps - mean * mean) / kReps);
        worst_sim = std::max(worst_sim, std::abs(mean - (j - 1) / kP) / se);
    }
    const bool ok = std::abs(z1) < 3 && std::abs(z2) < 3 && worst_sim < 3;
    return {ok, fmt("z(E[T])=%.2f z(E[T^2])=%.2f simulator max |z|=%.2f (all < 3)", z1, z2, worst_sim)};
}

Outcome clique_growth()
{
    const Time times[] = {10000, 100000, 1000000};
    std::vector<double> frac(3, 0), clique(3, 0);
    for (int i = 0; i < 3; ++i) {
        for (std::uint64_t s = 0; s < 10; ++s) {
            CliqueExperimentConfig cfg;
            cfg.p = 0.5;
            cfg.t = times[i];
            cfg.seed = 1000 + s;
            cfg.m = 10;
            cfg.eps = 0.1;
            cfg.eps_prime = 0.05;
            cfg.top_k = 64;
            cfg.triangles = false;
            const auto r = clique_experiment(cfg);
            frac[i] += r.pair_fraction / 10.0;
            clique[i] += static_cast<double>(r.clique_size) / 10.0;
        }
    }
    const bool frac_mono = frac[0] <= frac[1] && frac[1] <= frac[2];
    const bool clique_mono = clique[0] <= clique[1] && clique[1] <= clique[2];
    const bool ok = frac_mono && clique_mono && frac[2] >= 0.9;
    return {ok, fmt("pair fraction %.3f, %.3f, %.3f (nondecreasing %s, final >= 0.9 %s); "
                    "top-64 clique %.1f, %.1f, %.1f (nondecreasing %s)",
                    frac[0], frac[1], frac[2], frac_mono ? "yes" : "no", frac[2] >= 0.9 ? "yes" : "no", clique[0],
                    clique[1], clique[2], clique_mono ? "yes" : "no")};
}

// Size of the largest clique by enumerating every clique of the candidate
// set: each clique is extended only by later candidates adjacent to all
// members, so no subset is skipped except non-cliques.
std::size_t enumerate_max_clique(const LocalAdjacency& adj)
{
    const std::size_t n = adj.size();
    std::size_t best = 0;
    std::vector<std::size_t> members;
    std::function<void(std::size_t)> extend = [&](std::size_t from) {
        best = std::max(best, members.size());
        for (std::size_t v = from; v < n; ++v) {
            bool ok = true;
            for (std::size_t u : members) {
                ok = ok && adj.connected(u, v);
            }
            if (ok) {
                members.push_back(v);
                extend(v + 1);
                members.pop_back();
            }
        }
    };
    extend(0);
    return best;
}

Outcome exact_clique_oracle()
{
    int agree = 0;
    std::string sizes;
    for (std::uint64_t s = 0; s < 20; ++s) {
        GlpGraph g(0.5, 2000 + s);
        Rng rng(2000 + s);
        advance(g, rng, 10000);
        const auto top = top_degree_vertices(g, 30);
        const LocalAdjacency adj(g, top);
        const auto bnb = max_clique_exact(adj).size();
        const auto oracle = enumerate_max_clique(adj);
        agree += bnb == oracle ? 1 : 0;
        sizes += std::to_string(bnb) + (bnb == oracle ? "" : "!") + " ";
    }
    return {agree == 20, fmt("%d/20 seeds agree; sizes: %s", agree, sizes.c_str())};
}

Outcome triangle_scaling()
{
    // K4 oracle: 4 triangles exactly.
    std::vector<VertexId> k4;
    for (VertexId a = 1; a <= 4; ++a) {
        for (VertexId b = a + 1; b <= 4; ++b) {
            k4.insert(k4.end(), {a, b});
        }
    }
    const auto k4_count = count_triangles(simple_projection(k4, 4));

    std::vector<std::pair<double, double>> pts;
    for (Time t : {Time{10000}, Time{100000}, Time{1000000}}) {
        double mean = 0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            GlpGraph g(0.5, 3000 + s);
            Rng rng(3000 + s);
            advance(g, rng, t);
            mean += static_cast<double>(count_triangles(g)) / 10.0;
        }
        pts.emplace_back(std::log(static_cast<double>(t)), std::log(mean));
    }
    const double slope = fit_loglog(pts).estimate;
    const bool slope_ok = std::abs(slope - 1.0) <= 0.3;
    Outcome o;
    o.pass = k4_count == 4;
    o.detail = fmt("K4 triangles = %llu (gate); slope %.3f in 1.0 +- 0.3: %s (exploratory)",
                   static_cast<unsigned long long>(k4_count), slope, slope_ok ? "yes" : "WARN");
    return o;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome reproducibility()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "glp_acceptance_repro";
    fs::remove_all(root);
    // Each command writes only to files under the given directory.
    const auto commands = [](const fs::path& d) -> std::vector<std::vector<std::string>> {
        const auto s = [&](const char* name) { return (d / name).string(); };
        return {
            {"generate", "--p", "0.4", "--steps", "20000", "--seed", "5", "--out", s("g.txt"), "--snapshots",
             "100,1000,10000", "--watch", "1,2", "--snapshots-out", s("snap.csv")},
            {"stats", "--p", "0.4", "--steps", "20000", "--seed", "5", "--triangles", "--out", s("stats.json"),
             "--csv", s("stats.csv")},
            {"hitting", "--p", "0.5", "--m", "4", "--j", "260", "--k", "8,16", "--replicas", "200",
             "--dom-samples", "2000", "--seed", "3", "--csv", s("hit.csv"), "--out", s("hit.json")},
            {"clique", "--p", "0.5", "--steps", "20000", "--seed", "4", "--out", s("clique.json")},
            {"ensemble", "--p", "0.3,0.6", "--steps", "5000", "--replicas", "3", "--seed", "8", "--threads", "2",
             "--triangles", "--clique", "--out-dir", s("ens")},
        };
    };
    std::string detail;
    bool ok = true;
    for (const char* run_name : {"a", "b"}) {
        const fs::path d = root / run_name;
        fs::create_directories(d);
        for (const auto& args : commands(d)) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            if (code == cli::kUsage) {
                ok = false;
                detail += args[0] + " failed: " + err.str() + "; ";
            }
        }
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto rel = fs::relative(entry.path(), root / "a");
        ++compared;
        if (slurp(entry.path()) != slurp(root / "b" / rel)) {
            ok = false;
            detail += "differs: " + rel.string() + "; ";
        }
    }
    fs::remove_all(root);
    ok = ok && compared >= 10;
    return {ok, detail + fmt("%zu output files byte-identical across reruns", compared)};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {1, "conservation", conservation},
        {2, "sampling exactness", sampling_exactness},
        {3, "drift identity", drift_identity},
        {4, "martingale constancy", martingale},
        {5, "max-degree exponent", max_degree_exponent},
        {6, "upper-bound property", upper_bound},
        {7, "hitting-time domination", hitting_domination},
        {8, "arrival moments", arrival_moments},
        {9, "clique growth", clique_growth},
        {10, "exact clique oracle", exact_clique_oracle},
        {11, "triangle scaling", triangle_scaling},
        {12, "reproducibility", reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d %-24s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass || !o.gated ? 0 : 1;
    }
    std::printf("%d gated criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
