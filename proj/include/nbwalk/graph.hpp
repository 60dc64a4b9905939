#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbwalk/budget.hpp"
#include "nbwalk/matrix.hpp"

namespace nbwalk {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Simple undirected graph on vertices 0..N-1: symmetric adjacency, no
// self-loops, no parallel edges. Immutable once built.
class FiniteGraph {
public:
    // Duplicates (in either orientation) are collapsed. Throws InvalidSize for
    // vertex_count == 0 and InvalidArgument for self-loops or ids >= N.
    static FiniteGraph from_edges(std::size_t vertex_count, std::span<const Edge> edges);

    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    // Sorted ascending.
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    bool has_edge(Vertex u, Vertex v) const;

    // Common degree if every vertex has the same degree.
    std::optional<std::size_t> regular_degree() const;
    bool is_connected() const { return connected_; }

    // Edges with u < v, lexicographically sorted.
    std::vector<Edge> edges() const;

    // Stable 64-bit FNV-1a digest of the serialized edge list, as 16 hex digits.
    std::string id() const;

    template <typename T>
    Matrix<T> adjacency_matrix() const {
        Matrix<T> a(vertex_count(), vertex_count());
        for (Vertex u = 0; u < vertex_count(); ++u)
            for (Vertex v : adjacency_[u]) a(u, v) = T(1);
        return a;
    }

    bool operator==(const FiniteGraph& other) const { return adjacency_ == other.adjacency_; }

private:
    explicit FiniteGraph(std::vector<std::vector<Vertex>> adjacency);

    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
    bool connected_ = false;
};

struct TorusSpec {
    std::size_t side = 3;       // n >= 3
    std::size_t dimension = 1;  // d >= 1

    // n^d, or nullopt on 64-bit overflow.
    std::optional<std::size_t> vertex_count() const;
};

// Mixed-radix coordinates, least significant first: v = x_1 + n*x_2 + n^2*x_3 ...
std::vector<std::size_t> torus_coordinates(const TorusSpec& spec, Vertex v);
Vertex torus_vertex(const TorusSpec& spec, std::span<const std::size_t> coords);

FiniteGraph build_cycle(std::size_t n);
FiniteGraph build_torus(const TorusSpec& spec, const Budgets& budgets = {});
FiniteGraph build_complete(std::size_t n);

// Whitespace-separated "u v" pairs, one edge per line; '#' starts a comment
// line. Throws ParseError carrying the 1-based line number.
FiniteGraph parse_edge_list(std::string_view text);

// One "u v" line per edge, u < v, sorted.
std::string serialize_edge_list(const FiniteGraph& g);

}  // namespace nbwalk
