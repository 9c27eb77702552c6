#include "glp/edge_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace glp {

std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) {
        throw std::runtime_error("cannot format double");
    }
    return std::string(buf, ptr);
}

void export_edges(const GlpGraph& graph, std::ostream& out)
{
    out << "# glp v1 p=" << format_double(graph.p()) << " steps=" << graph.t() << " seed=" << graph.seed()
        << '\n';
    const auto ends = graph.endpoints();
    std::string line;
    char buf[32];
    for (std::size_t i = 0; i < ends.size(); i += 2) {
        line.clear();
        auto r = std::to_chars(buf, buf + sizeof buf, ends[i]);
        line.append(buf, r.ptr);
        line.push_back(' ');
        r = std::to_chars(buf, buf + sizeof buf, ends[i + 1]);
        line.append(buf, r.ptr);
        line.push_back('\n');
        out << line;
    }
    if (!out) {
        throw std::runtime_error("failed writing edge list");
    }
}

void export_edges(const GlpGraph& graph, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    export_edges(graph, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view text, std::size_t line, const char* field)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        fail(line, std::string("bad ") + field + " '" + std::string(text) + "'");
    }
    return value;
}

std::string_view header_field(std::string_view header, std::string_view key, std::size_t line)
{
    const auto pos = header.find(std::string(key) + "=");
    if (pos == std::string_view::npos) {
        fail(line, "header missing " + std::string(key));
    }
    auto rest = header.substr(pos + key.size() + 1);
    return rest.substr(0, rest.find(' '));
}

}  // namespace

GlpGraph import_edges(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        fail(1, "empty input");
    }
    const std::string_view header = line;
    if (!header.starts_with("# glp v1 ")) {
        fail(1, "expected '# glp v1' header");
    }
    const auto p_text = header_field(header, "p", 1);
    double p = 0;
    {
        auto [ptr, ec] = std::from_chars(p_text.data(), p_text.data() + p_text.size(), p);
        if (ec != std::errc{} || ptr != p_text.data() + p_text.size()) {
            fail(1, "bad p '" + std::string(p_text) + "'");
        }
    }
    const auto steps = parse_number<Time>(header_field(header, "steps", 1), 1, "steps");
    const auto seed = parse_number<std::uint64_t>(header_field(header, "seed", 1), 1, "seed");
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(1, "p outside [0, 1]");
    }

    GlpGraph graph(p, seed);
    std::size_t lineno = 1;
    std::size_t edges = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::string_view text = line;
        const auto space = text.find(' ');
        if (space == std::string_view::npos) {
            fail(lineno, "expected 'u v'");
        }
        const auto u = parse_number<VertexId>(text.substr(0, space), lineno, "u");
        const auto v = parse_number<VertexId>(text.substr(space + 1), lineno, "v");
        if (edges == 0) {
            if (u != 1 || v != 1) {
                fail(lineno, "first edge must be the initial loop '1 1'");
            }
            ++edges;
            continue;
        }
        StepOutcome outcome;
        outcome.u = u;
        outcome.v = v;
        if (!graph.contains(u)) {
            fail(lineno, "unknown vertex " + std::to_string(u));
        }
        if (v == graph.vertex_count() + 1) {
            outcome.kind = StepKind::vertex;
            outcome.new_vertex = v;
        } else if (graph.contains(v)) {
            outcome.kind = StepKind::edge;
        } else {
            fail(lineno, "vertex " + std::to_string(v) + " skips ahead of creation order");
        }
        graph.apply(outcome);
        ++edges;
    }
    if (edges == 0) {
        fail(lineno, "no edges");
    }
    if (graph.t() != steps) {
        fail(lineno, "header says steps=" + std::to_string(steps) + " but found " + std::to_string(graph.t()));
    }
    return graph;
}

GlpGraph import_edges(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return import_edges(in);
}

}  // namespace glp
