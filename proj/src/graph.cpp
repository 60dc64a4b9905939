#include "nbwalk/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>

#include "nbwalk/errors.hpp"

namespace nbwalk {

namespace {

bool reachable_from_zero(const std::vector<std::vector<Vertex>>& adjacency) {
    if (adjacency.empty()) return false;
    std::vector<bool> seen(adjacency.size(), false);
    std::queue<Vertex> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
        Vertex u = frontier.front();
        frontier.pop();
        for (Vertex v : adjacency[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                frontier.push(v);
            }
        }
    }
    return count == adjacency.size();
}

}  // namespace

FiniteGraph::FiniteGraph(std::vector<std::vector<Vertex>> adjacency) : adjacency_(std::move(adjacency)) {
    std::size_t degree_sum = 0;
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        degree_sum += nbrs.size();
    }
    edge_count_ = degree_sum / 2;
    connected_ = reachable_from_zero(adjacency_);
}

FiniteGraph FiniteGraph::from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
    if (vertex_count == 0) throw InvalidSize("graph must have at least one vertex");
    if (vertex_count > std::numeric_limits<Vertex>::max()) throw CapacityError("vertex count exceeds 32-bit ids");
    std::vector<std::vector<Vertex>> adjacency(vertex_count);
    for (auto [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count) {
            throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
        }
        if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
        adjacency[u].push_back(v);
        adjacency[v].push_back(u);
    }
    return FiniteGraph(std::move(adjacency));
}

bool FiniteGraph::has_edge(Vertex u, Vertex v) const {
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::optional<std::size_t> FiniteGraph::regular_degree() const {
    std::size_t r = adjacency_.front().size();
    for (const auto& nbrs : adjacency_)
        if (nbrs.size() != r) return std::nullopt;
    return r;
}

std::vector<Edge> FiniteGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < adjacency_.size(); ++u)
        for (Vertex v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::string FiniteGraph::id() const {
    std::uint64_t hash = 14695981039346656037ull;
    auto mix = [&hash](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            hash ^= (word >> (8 * i)) & 0xffu;
            hash *= 1099511628211ull;
        }
    };
    mix(vertex_count());
    for (auto [u, v] : edges()) {
        mix(u);
        mix(v);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::optional<std::size_t> TorusSpec::vertex_count() const {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dimension; ++i) {
        if (total > std::numeric_limits<std::size_t>::max() / side) return std::nullopt;
        total *= side;
    }
    return total;
}

std::vector<std::size_t> torus_coordinates(const TorusSpec& spec, Vertex v) {
    std::vector<std::size_t> coords(spec.dimension);
    std::size_t rest = v;
    for (auto& c : coords) {
        c = rest % spec.side;
        rest /= spec.side;
    }
    return coords;
}

Vertex torus_vertex(const TorusSpec& spec, std::span<const std::size_t> coords) {
    std::size_t v = 0;
    for (std::size_t i = coords.size(); i-- > 0;) v = v * spec.side + coords[i];
    return static_cast<Vertex>(v);
}

FiniteGraph build_cycle(std::size_t n) {
    if (n < 3) throw InvalidSize("cycle needs n >= 3, got " + std::to_string(n));
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, static_cast<Vertex>((i + 1) % n));
    return FiniteGraph::from_edges(n, edges);
}

FiniteGraph build_torus(const TorusSpec& spec, const Budgets& budgets) {
    if (spec.side < 3) throw InvalidSize("torus needs side >= 3, got " + std::to_string(spec.side));
    if (spec.dimension < 1) throw InvalidSize("torus needs dimension >= 1");
    auto count = spec.vertex_count();
    if (!count || *count > budgets.max_vertices) {
        throw CapacityError("torus " + std::to_string(spec.side) + "^" + std::to_string(spec.dimension) +
                            " exceeds vertex budget " + std::to_string(budgets.max_vertices));
    }
    std::vector<Edge> edges;
    edges.reserve(*count * spec.dimension);
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < spec.dimension; ++axis) {
        for (std::size_t v = 0; v < *count; ++v) {
            std::size_t coord = (v / stride) % spec.side;
            std::size_t next = coord + 1 == spec.side ? v - coord * stride : v + stride;
            edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(next));
        }
        stride *= spec.side;
    }
    return FiniteGraph::from_edges(*count, edges);
}

FiniteGraph build_complete(std::size_t n) {
    if (n < 2) throw InvalidSize("complete graph needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return FiniteGraph::from_edges(n, edges);
}

FiniteGraph parse_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::size_t max_id = 0;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos > start) tokens.push_back(line.substr(start, pos - start));
        }
        if (tokens.empty() || tokens.front().front() == '#') continue;
        if (tokens.size() != 2) throw ParseError(line_no, "expected two vertex ids");

        Vertex ids[2];
        for (int i = 0; i < 2; ++i) {
            auto tok = tokens[static_cast<std::size_t>(i)];
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), ids[i]);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw ParseError(line_no, "not a nonnegative integer: '" + std::string(tok) + "'");
            }
        }
        if (ids[0] == ids[1]) throw ParseError(line_no, "self-loop at vertex " + std::to_string(ids[0]));
        max_id = std::max<std::size_t>({max_id, ids[0], ids[1]});
        edges.emplace_back(ids[0], ids[1]);
    }
    if (edges.empty()) throw ParseError(line_no, "edge list contains no edges");
    return FiniteGraph::from_edges(max_id + 1, edges);
}

std::string serialize_edge_list(const FiniteGraph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace nbwalk
