#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "glp/process.hpp"

namespace glp {

/// Simple projection (loops dropped, parallel edges collapsed) in CSR form.
/// Neighbour lists are sorted; vertex ids stay 1-based.
struct SimpleGraph {
    std::size_t vertex_count = 0;
    std::vector<std::uint64_t> offsets;  // size vertex_count + 1, indexed by v - 1
    std::vector<VertexId> neighbors;

    std::size_t edge_count() const noexcept { return neighbors.size() / 2; }
    std::span<const VertexId> neighbors_of(VertexId v) const noexcept
    {
        return {neighbors.data() + offsets[v - 1], neighbors.data() + offsets[v]};
    }
    bool adjacent(VertexId u, VertexId v) const noexcept;
    /// Each simple edge once as (u, v) with u < v, flattened.
    std::vector<VertexId> endpoints() const;

    friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;
};

SimpleGraph simple_projection(std::span<const VertexId> endpoints, std::size_t vertex_count);
inline SimpleGraph simple_projection(const GlpGraph& graph)
{
    return simple_projection(graph.endpoints(), graph.vertex_count());
}

/// Triangles of the simple projection, by degree-ordered orientation and
/// marked-neighbour intersection.
std::uint64_t count_triangles(const SimpleGraph& graph);
inline std::uint64_t count_triangles(const GlpGraph& graph) { return count_triangles(simple_projection(graph)); }

/// Dense adjacency of the simple projection restricted to a candidate set,
/// built in one pass over the edge list. Local index i is candidates[i].
class LocalAdjacency {
public:
    LocalAdjacency(const GlpGraph& graph, std::span<const VertexId> candidates);
    /// Test helper: n vertices 1..n with the given simple edges.
    LocalAdjacency(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges);

    std::size_t size() const noexcept { return vertices_.size(); }
    VertexId vertex(std::size_t i) const noexcept { return vertices_[i]; }
    bool connected(std::size_t a, std::size_t b) const noexcept
    {
        return (rows_[a * words_ + b / 64] >> (b % 64)) & 1U;
    }
    std::span<const std::uint64_t> row(std::size_t a) const noexcept { return {rows_.data() + a * words_, words_}; }
    std::size_t words() const noexcept { return words_; }

private:
    void link(std::size_t a, std::size_t b) noexcept;

    std::vector<VertexId> vertices_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> rows_;
};

struct Leader {
    std::uint32_t block = 0;
    VertexId vertex = 0;
    Degree degree = 0;
};

struct LeaderSet {
    std::uint32_t m = 1;
    std::uint32_t j_lo = 1;
    std::uint32_t j_hi = 1;
    Time t_ref = 0;
    std::vector<Leader> leaders;

    std::vector<VertexId> vertices() const;
};

/// Maximum-degree vertex of each block j_lo..j_hi at the graph's current
/// time; ties go to the smallest index.
LeaderSet leaders(const GlpGraph& graph, std::uint32_t m, std::uint32_t j_lo, std::uint32_t j_hi);

struct CliqueReport {
    std::size_t candidate_count = 0;
    std::size_t pairs_total = 0;
    std::size_t pairs_checked = 0;
    std::size_t pairs_connected = 0;
    double pair_fraction = 1.0;
    bool sampled = false;
    std::size_t missing_count = 0;
    std::vector<std::pair<VertexId, VertexId>> missing_pairs;  // first kMissingListed
    std::size_t largest_verified = 0;

    static constexpr std::size_t kMissingListed = 100;
    bool is_clique() const noexcept { return missing_count == 0; }
};

/// Checks pairwise adjacency of S in the simple projection. Above `pair_cap`
/// pairs, a deterministic sample of `pair_cap` pairs is checked instead and
/// the report is flagged as sampled.
CliqueReport is_clique(const GlpGraph& graph,
                       std::span<const VertexId> vertices,
                       std::size_t pair_cap = 10000,
                       std::uint64_t sample_seed = 0);

/// Exact maximum clique by branch-and-bound with a greedy-colouring bound.
/// Returns local indices. Requires adj.size() <= 128.
std::vector<std::size_t> max_clique_exact(const LocalAdjacency& adj);

/// Greedy clique: repeatedly add the candidate with most remaining
/// neighbours among the survivors. Returns local indices.
std::vector<std::size_t> max_clique_greedy(const LocalAdjacency& adj);

inline constexpr std::size_t kExactCliqueCap = 128;

/// The K highest-degree vertices (ties: smallest index), best first.
std::vector<VertexId> top_degree_vertices(const GlpGraph& graph, std::size_t k);

/// Maximum clique among the K highest-degree vertices: exact for
/// K <= 128, greedy above.
std::vector<VertexId> max_clique_topk(const GlpGraph& graph, std::size_t k);

struct CliqueExperimentConfig {
    double p = 0.5;
    Time t = 1000000;
    std::uint64_t seed = 0;
    std::uint32_t m = 10;
    double eps = 0.1;
    double eps_prime = 0.05;
    std::size_t top_k = 64;
    bool triangles = true;
    std::size_t pair_cap = 10000;
};

struct CliqueExperimentReport {
    double p = 0;
    std::uint64_t seed = 0;
    Time t = 0;
    std::uint32_t m = 0;
    std::uint32_t j_lo = 0;
    std::uint32_t j_hi = 0;
    double alpha = 0;  // clique exponent (1-eps)(1-p)/(2-p)
    double beta = 0;   // (1 + eps(1-p)/2)/2
    std::size_t leader_count = 0;
    std::size_t leaders_above_beta = 0;  // leaders with degree >= t^beta / m at t
    double pair_fraction = 0;
    std::size_t missing_pairs = 0;
    bool sampled = false;
    std::size_t clique_size = 0;  // max_clique_topk at 2t
    std::uint64_t triangles = 0;  // simple projection of G_{2t}
};

/// Block range [ceil(t^eps'), floor(t^alpha)] used by the experiment.
std::pair<std::uint32_t, std::uint32_t> leader_block_range(Time t, double p, double eps, double eps_prime);

/// Grows G_t, picks block leaders at t, grows on to G_{2t} and measures
/// leader pair connectivity, the top-K clique and triangles there.
CliqueExperimentReport clique_experiment(const CliqueExperimentConfig& config);

}  // namespace glp
