#include "glp/community.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "glp/rng.hpp"

namespace glp {

namespace {

constexpr std::uint64_t pair_key(VertexId a, VertexId b) noexcept
{
    if (a > b) {
        std::swap(a, b);
    }
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

bool SimpleGraph::adjacent(VertexId u, VertexId v) const noexcept
{
    if (u == v || u == 0 || v == 0 || u > vertex_count || v > vertex_count) {
        return false;
    }
    const auto n = neighbors_of(u);
    return std::binary_search(n.begin(), n.end(), v);
}

std::vector<VertexId> SimpleGraph::endpoints() const
{
    std::vector<VertexId> out;
    out.reserve(neighbors.size());
    for (VertexId u = 1; u <= vertex_count; ++u) {
        for (VertexId v : neighbors_of(u)) {
            if (u < v) {
                out.push_back(u);
                out.push_back(v);
            }
        }
    }
    return out;
}

SimpleGraph simple_projection(std::span<const VertexId> endpoints, std::size_t vertex_count)
{
    std::vector<std::uint64_t> keys;
    keys.reserve(endpoints.size() / 2);
    for (std::size_t i = 0; i + 1 < endpoints.size(); i += 2) {
        if (endpoints[i] != endpoints[i + 1]) {
            keys.push_back(pair_key(endpoints[i], endpoints[i + 1]));
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    SimpleGraph g;
    g.vertex_count = vertex_count;
    g.offsets.assign(vertex_count + 1, 0);
    for (std::uint64_t k : keys) {
        ++g.offsets[(k >> 32)];
        ++g.offsets[(k & 0xffffffffULL)];
    }
    // offsets[v] currently holds deg(v); shift to exclusive prefix sums over v - 1.
    std::uint64_t run = 0;
    for (std::size_t v = 1; v <= vertex_count; ++v) {
        const std::uint64_t d = g.offsets[v];
        g.offsets[v] = run + d;
        run += d;
    }
    g.offsets[0] = 0;
    g.neighbors.resize(run);
    std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    // Keys are sorted by (a, b), so each list fills in increasing order.
    for (std::uint64_t k : keys) {
        const auto a = static_cast<VertexId>(k >> 32);
        const auto b = static_cast<VertexId>(k & 0xffffffffULL);
        g.neighbors[cursor[a - 1]++] = b;
        g.neighbors[cursor[b - 1]++] = a;
    }
    return g;
}

std::uint64_t count_triangles(const SimpleGraph& graph)
{
    const std::size_t n = graph.vertex_count;
    const auto before = [&](VertexId a, VertexId b) {
        const auto da = graph.offsets[a] - graph.offsets[a - 1];
        const auto db = graph.offsets[b] - graph.offsets[b - 1];
        return da < db || (da == db && a < b);
    };
    // Orient each edge from lower to higher (degree, id) rank.
    std::vector<std::uint64_t> out_offsets(n + 1, 0);
    for (VertexId u = 1; u <= n; ++u) {
        for (VertexId v : graph.neighbors_of(u)) {
            if (before(u, v)) {
                ++out_offsets[u];
            }
        }
    }
    for (std::size_t v = 1; v <= n; ++v) {
        out_offsets[v] += out_offsets[v - 1];
    }
    std::vector<VertexId> out(out_offsets[n]);
    for (VertexId u = 1; u <= n; ++u) {
        auto pos = out_offsets[u - 1];
        for (VertexId v : graph.neighbors_of(u)) {
            if (before(u, v)) {
                out[pos++] = v;
            }
        }
    }

    std::vector<VertexId> mark(n + 1, 0);
    std::uint64_t triangles = 0;
    for (VertexId u = 1; u <= n; ++u) {
        const auto b = out_offsets[u - 1];
        const auto e = out_offsets[u];
        for (auto i = b; i < e; ++i) {
            mark[out[i]] = u;
        }
        for (auto i = b; i < e; ++i) {
            const VertexId w = out[i];
            for (auto k = out_offsets[w - 1]; k < out_offsets[w]; ++k) {
                triangles += mark[out[k]] == u ? 1 : 0;
            }
        }
    }
    return triangles;
}

LocalAdjacency::LocalAdjacency(const GlpGraph& graph, std::span<const VertexId> candidates)
    : vertices_(candidates.begin(), candidates.end()), words_((candidates.size() + 63) / 64)
{
    rows_.assign(vertices_.size() * words_, 0);
    std::vector<std::int32_t> local(graph.vertex_count() + 1, -1);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const VertexId v = vertices_[i];
        if (!graph.contains(v)) {
            throw LookupError("unknown vertex " + std::to_string(v));
        }
        if (local[v] >= 0) {
            throw ParameterError("candidate set contains vertex " + std::to_string(v) + " twice");
        }
        local[v] = static_cast<std::int32_t>(i);
    }
    const auto ends = graph.endpoints();
    for (std::size_t i = 0; i < ends.size(); i += 2) {
        const auto a = local[ends[i]];
        const auto b = local[ends[i + 1]];
        if (a >= 0 && b >= 0 && a != b) {
            link(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        }
    }
}

LocalAdjacency::LocalAdjacency(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges)
    : vertices_(n), words_((n + 63) / 64)
{
    std::iota(vertices_.begin(), vertices_.end(), VertexId{1});
    rows_.assign(n * words_, 0);
    for (const auto& [u, v] : edges) {
        if (u != v) {
            link(u - 1, v - 1);
        }
    }
}

void LocalAdjacency::link(std::size_t a, std::size_t b) noexcept
{
    rows_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
    rows_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
}

std::vector<VertexId> LeaderSet::vertices() const
{
    std::vector<VertexId> out;
    out.reserve(leaders.size());
    for (const auto& l : leaders) {
        out.push_back(l.vertex);
    }
    return out;
}

LeaderSet leaders(const GlpGraph& graph, std::uint32_t m, std::uint32_t j_lo, std::uint32_t j_hi)
{
    if (m == 0 || j_lo == 0 || j_lo > j_hi) {
        throw ParameterError("empty leader block range");
    }
    if (static_cast<std::uint64_t>(j_hi) * m > graph.vertex_count()) {
        throw ParameterError("block " + std::to_string(j_hi) + " of width " + std::to_string(m) +
                             " is not fully present at t=" + std::to_string(graph.t()));
    }
    LeaderSet set{m, j_lo, j_hi, graph.t(), {}};
    const auto deg = graph.degrees();
    for (std::uint32_t j = j_lo; j <= j_hi; ++j) {
        Leader best{j, 0, 0};
        const std::size_t first = static_cast<std::size_t>(j - 1) * m;
        for (std::size_t i = first; i < first + m; ++i) {
            if (best.vertex == 0 || deg[i] > best.degree) {
                best.vertex = static_cast<VertexId>(i + 1);
                best.degree = deg[i];
            }
        }
        set.leaders.push_back(best);
    }
    return set;
}

namespace {

struct Bits128 {
    std::uint64_t w[2] = {0, 0};

    bool any() const noexcept { return (w[0] | w[1]) != 0; }
    void set(std::size_t i) noexcept { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    std::size_t first() const noexcept
    {
        return w[0] != 0 ? static_cast<std::size_t>(std::countr_zero(w[0]))
                         : 64 + static_cast<std::size_t>(std::countr_zero(w[1]));
    }
    Bits128 operator&(const Bits128& o) const noexcept { return {{w[0] & o.w[0], w[1] & o.w[1]}}; }
    Bits128 minus(const Bits128& o) const noexcept { return {{w[0] & ~o.w[0], w[1] & ~o.w[1]}}; }
};

class CliqueSearch {
public:
    explicit CliqueSearch(const LocalAdjacency& adj) : n_(adj.size()), adj_(n_)
    {
        for (std::size_t i = 0; i < n_; ++i) {
            const auto row = adj.row(i);
            for (std::size_t k = 0; k < row.size(); ++k) {
                adj_[i].w[k] = row[k];
            }
        }
    }

    std::vector<std::size_t> solve()
    {
        Bits128 all;
        for (std::size_t i = 0; i < n_; ++i) {
            all.set(i);
        }
        if (n_ > 0) {
            best_ = {0};
        }
        current_.clear();
        expand(all);
        return best_;
    }

private:
    // Greedy sequential colouring of P; colour classes bound the clique size
    // reachable from each prefix of the order.
    void colour(Bits128 pool, std::vector<std::size_t>& order, std::vector<std::size_t>& bound) const
    {
        std::size_t k = 0;
        while (pool.any()) {
            ++k;
            Bits128 q = pool;
            while (q.any()) {
                const std::size_t v = q.first();
                q.reset(v);
                q = q.minus(adj_[v]);
                pool.reset(v);
                order.push_back(v);
                bound.push_back(k);
            }
        }
    }

    void expand(Bits128 pool)
    {
        std::vector<std::size_t> order;
        std::vector<std::size_t> bound;
        colour(pool, order, bound);
        for (std::size_t idx = order.size(); idx-- > 0;) {
            if (current_.size() + bound[idx] <= best_.size()) {
                return;
            }
            const std::size_t v = order[idx];
            current_.push_back(v);
            const Bits128 next = pool & adj_[v];
            if (next.any()) {
                expand(next);
            } else if (current_.size() > best_.size()) {
                best_ = current_;
            }
            current_.pop_back();
            pool.reset(v);
        }
    }

    std::size_t n_;
    std::vector<Bits128> adj_;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> max_clique_exact(const LocalAdjacency& adj)
{
    if (adj.size() > kExactCliqueCap) {
        throw ParameterError("exact clique search is capped at 128 candidates");
    }
    auto best = CliqueSearch(adj).solve();
    std::sort(best.begin(), best.end());
    return best;
}

std::vector<std::size_t> max_clique_greedy(const LocalAdjacency& adj)
{
    const std::size_t n = adj.size();
    std::vector<char> alive(n, 1);
    std::vector<std::size_t> clique;
    for (;;) {
        std::size_t pick = n;
        std::size_t pick_deg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) {
                continue;
            }
            std::size_t d = 0;
            for (std::size_t k = 0; k < n; ++k) {
                d += (alive[k] && adj.connected(i, k)) ? 1 : 0;
            }
            if (pick == n || d > pick_deg) {
                pick = i;
                pick_deg = d;
            }
        }
        if (pick == n) {
            break;
        }
        clique.push_back(pick);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == pick || !adj.connected(pick, k)) {
                alive[k] = 0;
            }
        }
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

CliqueReport is_clique(const GlpGraph& graph,
                       std::span<const VertexId> vertices,
                       std::size_t pair_cap,
                       std::uint64_t sample_seed)
{
    CliqueReport report;
    const std::size_t n = vertices.size();
    report.candidate_count = n;
    report.pairs_total = n < 2 ? 0 : n * (n - 1) / 2;

    {
        std::vector<VertexId> sorted(vertices.begin(), vertices.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ParameterError("clique candidates must be distinct");
        }
        for (VertexId v : sorted) {
            if (!graph.contains(v)) {
                throw LookupError("unknown vertex " + std::to_string(v));
            }
        }
    }

    const auto note_missing = [&](VertexId a, VertexId b) {
        ++report.missing_count;
        if (report.missing_pairs.size() < CliqueReport::kMissingListed) {
            report.missing_pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
    };

    if (report.pairs_total <= pair_cap) {
        const LocalAdjacency adj(graph, vertices);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (adj.connected(a, b)) {
                    ++report.pairs_connected;
                } else {
                    note_missing(vertices[a], vertices[b]);
                }
            }
        }
        report.pairs_checked = report.pairs_total;
        if (report.missing_count == 0) {
            report.largest_verified = n;
        } else if (n <= kExactCliqueCap) {
            report.largest_verified = max_clique_exact(adj).size();
        } else {
            report.largest_verified = max_clique_greedy(adj).size();
        }
    } else {
        report.sampled = true;
        Rng rng(sample_seed);
        std::vector<std::uint64_t> sampled;
        sampled.reserve(pair_cap);
        for (std::size_t s = 0; s < pair_cap; ++s) {
            const auto a = rng.below(n);
            auto b = rng.below(n - 1);
            b += b >= a ? 1 : 0;
            sampled.push_back(pair_key(vertices[a], vertices[b]));
        }
        std::unordered_set<std::uint64_t> wanted(sampled.begin(), sampled.end());
        std::unordered_set<std::uint64_t> found;
        const auto ends = graph.endpoints();
        for (std::size_t i = 0; i < ends.size(); i += 2) {
            if (ends[i] != ends[i + 1]) {
                const auto k = pair_key(ends[i], ends[i + 1]);
                if (wanted.contains(k)) {
                    found.insert(k);
                }
            }
        }
        for (std::uint64_t k : sampled) {
            if (found.contains(k)) {
                ++report.pairs_connected;
            } else {
                note_missing(static_cast<VertexId>(k >> 32), static_cast<VertexId>(k & 0xffffffffULL));
            }
        }
        report.pairs_checked = sampled.size();
        report.largest_verified = 0;
    }
    report.pair_fraction = report.pairs_checked == 0
                               ? 1.0
                               : static_cast<double>(report.pairs_connected) /
                                     static_cast<double>(report.pairs_checked);
    return report;
}

std::vector<VertexId> top_degree_vertices(const GlpGraph& graph, std::size_t k)
{
    const auto deg = graph.degrees();
    std::vector<VertexId> ids(deg.size());
    std::iota(ids.begin(), ids.end(), VertexId{1});
    const auto better = [&](VertexId a, VertexId b) {
        return deg[a - 1] > deg[b - 1] || (deg[a - 1] == deg[b - 1] && a < b);
    };
    k = std::min(k, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), better);
    ids.resize(k);
    return ids;
}

std::vector<VertexId> max_clique_topk(const GlpGraph& graph, std::size_t k)
{
    const auto candidates = top_degree_vertices(graph, k);
    const LocalAdjacency adj(graph, candidates);
    const auto local = candidates.size() <= kExactCliqueCap ? max_clique_exact(adj) : max_clique_greedy(adj);
    std::vector<VertexId> out;
    for (std::size_t i : local) {
        out.push_back(adj.vertex(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<std::uint32_t, std::uint32_t> leader_block_range(Time t, double p, double eps, double eps_prime)
{
    const auto x = static_cast<double>(t);
    const double alpha = (1.0 - eps) * (1.0 - p) / (2.0 - p);
    const auto lo = static_cast<std::uint32_t>(std::max(1.0, std::ceil(std::pow(x, eps_prime) - 1e-9)));
    const auto hi = static_cast<std::uint32_t>(std::floor(std::pow(x, alpha) + 1e-9));
    return {lo, hi};
}

CliqueExperimentReport clique_experiment(const CliqueExperimentConfig& config)
{
    if (!(config.p >= 0.0 && config.p < 1.0)) {
        throw ParameterError("clique experiment needs p in [0, 1)");
    }
    if (!(config.eps > 0.0 && config.eps < 1.0) || !(config.eps_prime > 0.0)) {
        throw ParameterError("eps must lie in (0, 1) and eps' must be positive");
    }
    if (config.t == 0 || 2 * config.t > kMaxSteps) {
        throw CapacityError("clique experiment needs 1 <= 2t < 2^31 - 2");
    }
    const auto [j_lo, j_hi] = leader_block_range(config.t, config.p, config.eps, config.eps_prime);
    if (j_lo > j_hi) {
        throw ParameterError("empty leader block range at t=" + std::to_string(config.t));
    }

    CliqueExperimentReport r;
    r.p = config.p;
    r.seed = config.seed;
    r.t = config.t;
    r.m = config.m;
    r.j_lo = j_lo;
    r.j_hi = j_hi;
    r.alpha = (1.0 - config.eps) * (1.0 - config.p) / (2.0 - config.p);
    r.beta = (1.0 + config.eps * (1.0 - config.p) / 2.0) / 2.0;

    GlpGraph graph(config.p, config.seed);
    Rng rng(config.seed);
    graph.reserve(2 * config.t);
    advance(graph, rng, config.t);
    const LeaderSet set = leaders(graph, config.m, j_lo, j_hi);
    r.leader_count = set.leaders.size();
    const double floor_degree = std::pow(static_cast<double>(config.t), r.beta) / config.m;
    for (const auto& l : set.leaders) {
        r.leaders_above_beta += static_cast<double>(l.degree) >= floor_degree ? 1 : 0;
    }

    advance(graph, rng, 2 * config.t);
    const auto verts = set.vertices();
    const CliqueReport clique = is_clique(graph, verts, config.pair_cap, config.seed);
    r.pair_fraction = clique.pair_fraction;
    r.missing_pairs = clique.missing_count;
    r.sampled = clique.sampled;
    r.clique_size = max_clique_topk(graph, config.top_k).size();
    if (config.triangles) {
        r.triangles = count_triangles(graph);
    }
    return r;
}

}  // namespace glp
