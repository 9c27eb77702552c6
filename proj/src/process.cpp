#include "glp/process.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace glp {

void ProcessParams::validate() const
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("p must lie in [0, 1], got " + std::to_string(p));
    }
    if (steps == 0) {
        throw ParameterError("steps must be at least 1");
    }
    if (steps > kMaxSteps) {
        throw CapacityError("steps must be below 2^31 - 2, got " + std::to_string(steps));
    }
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (snapshot_times[i] > steps) {
            throw ParameterError("snapshot time " + std::to_string(snapshot_times[i]) + " exceeds steps");
        }
        if (i > 0 && snapshot_times[i] <= snapshot_times[i - 1]) {
            throw ParameterError("snapshot times must be strictly increasing");
        }
    }
    for (VertexId v : watched_vertices) {
        if (v == 0) {
            throw ParameterError("vertex ids start at 1");
        }
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const BlockSpec& b : watched_blocks) {
        if (b.j == 0 || b.m == 0) {
            throw ParameterError("block index and width must be at least 1");
        }
        if (static_cast<std::uint64_t>(b.j) * b.m > 0xffffffffULL) {
            throw CapacityError("block lies beyond the 32-bit vertex id space");
        }
        if (!std::is_sorted(b.thresholds.begin(), b.thresholds.end())) {
            throw ParameterError("block thresholds must be sorted");
        }
        if (!seen.emplace(b.j, b.m).second) {
            throw ConfigError("duplicate block spec j=" + std::to_string(b.j) + " m=" + std::to_string(b.m));
        }
    }
}

GlpGraph::GlpGraph(double p, std::uint64_t seed) : p_(p), seed_(seed)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("p must lie in [0, 1], got " + std::to_string(p));
    }
    degrees_.push_back(0);
    arrival_.push_back(0);
    bump(1);
    bump(1);
}

Degree GlpGraph::degree(VertexId v) const
{
    if (!contains(v)) {
        throw LookupError("unknown vertex " + std::to_string(v));
    }
    return degrees_[v - 1];
}

Time GlpGraph::arrival_time(VertexId j) const
{
    if (!contains(j)) {
        throw LookupError("unknown vertex " + std::to_string(j));
    }
    return arrival_[j - 1];
}

void GlpGraph::apply(const StepOutcome& outcome)
{
    ++t_;
    if (outcome.new_vertex) {
        degrees_.push_back(0);
        arrival_.push_back(t_);
    }
    bump(outcome.u);
    bump(outcome.v);
}

void GlpGraph::reserve(Time steps)
{
    endpoints_.reserve(2 * (steps + 1));
    const auto expected = static_cast<std::size_t>(p_ * static_cast<double>(steps) * 1.05) + 64;
    degrees_.reserve(std::min<std::size_t>(expected, steps + 1));
    arrival_.reserve(std::min<std::size_t>(expected, steps + 1));
}

GlpGraph new_graph(const ProcessParams& params)
{
    params.validate();
    return GlpGraph(params.p, params.seed);
}

StepOutcome draw_step(const GlpGraph& graph, Rng& rng) noexcept
{
    StepOutcome out;
    if (rng.bernoulli(graph.p())) {
        out.kind = StepKind::vertex;
        out.u = graph.sample_endpoint(rng);
        out.v = static_cast<VertexId>(graph.vertex_count() + 1);
        out.new_vertex = out.v;
    } else {
        out.kind = StepKind::edge;
        out.u = graph.sample_endpoint(rng);
        out.v = graph.sample_endpoint(rng);
    }
    return out;
}

}  // namespace glp
