#include "glp/run.hpp"

namespace glp {

Snapshot take_snapshot(const GlpGraph& graph, std::span<const VertexId> watched)
{
    Snapshot s{graph.t(), graph.max_degree(), graph.vertex_count(), {}};
    s.watched_degrees.reserve(watched.size());
    for (VertexId v : watched) {
        s.watched_degrees.push_back(graph.contains(v) ? graph.degree(v) : 0);
    }
    return s;
}

RunResult run(const ProcessParams& params)
{
    GlpGraph graph = new_graph(params);
    Rng rng(params.seed);
    BlockTracker tracker(params.watched_blocks);
    tracker.attach(graph);

    std::vector<Snapshot> snapshots;
    snapshots.reserve(params.snapshot_times.size());
    auto next_snapshot = params.snapshot_times.begin();
    const auto maybe_snapshot = [&](const GlpGraph& g) {
        if (next_snapshot != params.snapshot_times.end() && *next_snapshot == g.t()) {
            snapshots.push_back(take_snapshot(g, params.watched_vertices));
            ++next_snapshot;
        }
    };
    maybe_snapshot(graph);
    advance(graph, rng, params.steps, [&](const GlpGraph& g, const StepOutcome& outcome) {
        tracker.on_step(g, outcome);
        maybe_snapshot(g);
    });
    auto hitting = tracker.records(graph.t());
    return {std::move(graph), std::move(snapshots), std::move(hitting)};
}

}  // namespace glp
