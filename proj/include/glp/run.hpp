#pragma once

#include <vector>

#include "glp/hitting.hpp"
#include "glp/process.hpp"

namespace glp {

struct Snapshot {
    Time t = 0;
    Degree max_degree = 0;
    std::size_t vertex_count = 0;
    std::vector<Degree> watched_degrees;  // 0 for watched vertices not yet created
};

struct RunResult {
    GlpGraph graph;
    std::vector<Snapshot> snapshots;
    std::vector<HittingRecord> hitting;
};

Snapshot take_snapshot(const GlpGraph& graph, std::span<const VertexId> watched);

/// Generates params.steps steps from G0 with Rng(params.seed), recording
/// snapshots and watched-block first-passage times along the way.
RunResult run(const ProcessParams& params);

}  // namespace glp
