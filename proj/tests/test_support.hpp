#pragma once

#include <initializer_list>
#include <utility>

#include "glp/process.hpp"

namespace glp::test {

// Replays a fixed edge sequence after G0. An edge whose second endpoint is
// the next unused id is treated as a vertex-step.
inline GlpGraph build_graph(double p, std::initializer_list<std::pair<VertexId, VertexId>> edges)
{
    GlpGraph g(p);
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

// Degrees (10, 1, 2, 3, 4) at t = 9.
inline GlpGraph five_vertex_graph()
{
    return build_graph(0.5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 3}, {1, 4}, {4, 5}, {1, 5}, {1, 5}});
}

}  // namespace glp::test
