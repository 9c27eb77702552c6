#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "glp/errors.hpp"
#include "glp/rng.hpp"

namespace glp {

using VertexId = std::uint32_t;  // 1-based, vertex 1 is the G0 vertex
using Time = std::uint64_t;      // number of steps performed
using Degree = std::uint64_t;

// Vertex ids are 32-bit, so a run may create at most 2^32 - 2 vertices.
inline constexpr Time kMaxSteps = (Time{1} << 31) - 3;

/// Block j of width m: vertices (j-1)m+1 .. jm, plus the degree thresholds
/// whose first-passage times are recorded.
struct BlockSpec {
    std::uint32_t j = 1;
    std::uint32_t m = 1;
    std::vector<Degree> thresholds;

    VertexId first() const noexcept { return static_cast<VertexId>((j - 1) * m + 1); }
    VertexId last() const noexcept { return static_cast<VertexId>(j * m); }

    friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// Everything that determines a run.
struct ProcessParams {
    double p = 0.5;
    Time steps = 1;
    std::uint64_t seed = 0;
    std::vector<Time> snapshot_times;
    std::vector<VertexId> watched_vertices;
    std::vector<BlockSpec> watched_blocks;

    /// Throws ParameterError, CapacityError or ConfigError.
    void validate() const;
};

enum class StepKind : std::uint8_t { vertex, edge };

struct StepOutcome {
    StepKind kind = StepKind::edge;
    VertexId u = 0;  // target (vertex-step) or first endpoint (edge-step)
    VertexId v = 0;  // the new vertex, or the second endpoint; u == v is a loop
    std::optional<VertexId> new_vertex;
};

/// Append-only GLP multigraph.
///
/// Edges are stored implicitly as consecutive pairs of `endpoints()`, in
/// creation order, with the initial loop as edge 0. A vertex appears in the
/// endpoint sequence once per unit of degree, which makes degree-proportional
/// sampling a single uniform index draw.
class GlpGraph {
public:
    /// G0: one vertex carrying one loop, t = 0.
    explicit GlpGraph(double p, std::uint64_t seed = 0);

    double p() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }
    Time t() const noexcept { return t_; }

    std::size_t vertex_count() const noexcept { return degrees_.size(); }
    std::size_t edge_count() const noexcept { return endpoints_.size() / 2; }
    Degree total_degree() const noexcept { return endpoints_.size(); }
    Degree max_degree() const noexcept { return max_degree_; }

    bool contains(VertexId v) const noexcept { return v >= 1 && v <= degrees_.size(); }
    Degree degree(VertexId v) const;
    Time arrival_time(VertexId j) const;

    std::span<const VertexId> endpoints() const noexcept { return endpoints_; }
    /// Element i is the degree of vertex i + 1.
    std::span<const Degree> degrees() const noexcept { return degrees_; }
    std::span<const Time> arrival_times() const noexcept { return arrival_; }
    std::pair<VertexId, VertexId> edge(std::size_t i) const noexcept
    {
        return {endpoints_[2 * i], endpoints_[2 * i + 1]};
    }

    /// Endpoint drawn uniformly from the current endpoint sequence.
    VertexId sample_endpoint(Rng& rng) const noexcept
    {
        return endpoints_[rng.below(endpoints_.size())];
    }

    /// Appends the edge in `outcome`, creating its new vertex if any, and
    /// advances t by one.
    void apply(const StepOutcome& outcome);

    void reserve(Time steps);

private:
    void bump(VertexId v) noexcept
    {
        const Degree d = ++degrees_[v - 1];
        if (d > max_degree_) {
            max_degree_ = d;
        }
        endpoints_.push_back(v);
    }

    double p_;
    std::uint64_t seed_;
    Time t_ = 0;
    Degree max_degree_ = 0;
    std::vector<VertexId> endpoints_;
    std::vector<Degree> degrees_;
    std::vector<Time> arrival_;
};

/// G0 for validated params.
GlpGraph new_graph(const ProcessParams& params);

inline VertexId sample_endpoint(const GlpGraph& graph, Rng& rng) noexcept { return graph.sample_endpoint(rng); }

/// Draws the next step on the frozen graph without applying it.
StepOutcome draw_step(const GlpGraph& graph, Rng& rng) noexcept;

inline StepOutcome step(GlpGraph& graph, Rng& rng)
{
    StepOutcome outcome = draw_step(graph, rng);
    graph.apply(outcome);
    return outcome;
}

/// Runs steps until graph.t() == until, calling `observer(graph, outcome)`
/// after every step.
template <class Observer>
void advance(GlpGraph& graph, Rng& rng, Time until, Observer&& observer)
{
    if (until > kMaxSteps) {
        throw CapacityError("step count exceeds the 32-bit vertex id space");
    }
    graph.reserve(until);
    while (graph.t() < until) {
        const StepOutcome outcome = step(graph, rng);
        observer(static_cast<const GlpGraph&>(graph), outcome);
    }
}

inline void advance(GlpGraph& graph, Rng& rng, Time until)
{
    advance(graph, rng, until, [](const GlpGraph&, const StepOutcome&) {});
}

}  // namespace glp
