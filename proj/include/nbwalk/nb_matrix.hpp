#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nbwalk/bigint.hpp"
#include "nbwalk/budget.hpp"
#include "nbwalk/graph.hpp"
#include "nbwalk/matrix.hpp"

namespace nbwalk {

// entries(u, v) = number of non-backtracking walks of length `step` from u to v.
struct WalkCountMatrix {
    std::size_t step = 0;
    Matrix<BigInt> entries;
    std::string graph_id;
};

// entries(u, v) = probability that an NB walk from u sits at v after `step`
// steps, on an r-regular graph.
struct TransitionMatrix {
    std::size_t step = 0;
    Matrix<Rational> entries;
    std::size_t regular_degree = 0;

    Matrix<double> to_double() const;
};

// Production path: A~(1) = A, A~(2) = A^2 - D, A~(k+2) = A A~(k+1) - (D - I) A~(k),
// with A~(0) = I. Valid for any simple graph. Throws InvalidArgument if k_max < 0.
std::vector<WalkCountMatrix> nb_counts(const FiniteGraph& g, int k_max);

// Same recurrence restricted to the column of `target`: element k holds
// A~(k)(u, target) for every u. O(k_max * |E|) instead of O(k_max * N^2 * r).
std::vector<std::vector<BigInt>> nb_count_column(const FiniteGraph& g, Vertex target, int k_max);

// Exhaustive depth-first enumeration of vertex sequences with v_{i+1} != v_{i-1}.
// Shares no code with the recurrence. Throws OracleBudgetError past
// budgets.oracle_depth or budgets.oracle_vertices.
BigInt nb_counts_brute_force(const FiniteGraph& g, Vertex u, Vertex v, int k, const Budgets& budgets = {});

// All endpoints at once: result[k][v] = number of NB walks u -> v of length k.
std::vector<std::vector<BigInt>> nb_counts_brute_force_table(const FiniteGraph& g, Vertex u, int k_max,
                                                            const Budgets& budgets = {});

// Power-series coefficients of (1 - x^2) (I - xA + x^2 (D - I))^{-1}, found by
// solving (I - xA + x^2 (D - I)) S(x) = (1 - x^2) I order by order with dense
// matrix products.
std::vector<WalkCountMatrix> gen_func_counts(const FiniteGraph& g, int k_max);

// Closed form for r-regular graphs in terms of adjacency powers:
//   sum_i (-1)^i C(n-i, i) (r-1)^i A^{n-2i} - sum_i (-1)^i C(n-i-2, i) (r-1)^i A^{n-2i-2}.
// Throws RegularityError for non-regular graphs.
WalkCountMatrix nb_counts_regular_closed_form(const FiniteGraph& g, int n);

// Exact NB transition matrices for an r-regular graph, r >= 2:
//   P~(0) = I, P~(1) = P = A/r, P~(k+2) = r/(r-1) P P~(k+1) - 1/(r-1) P~(k).
// Throws RegularityError or UnsupportedDegree.
std::vector<TransitionMatrix> nb_transition(const FiniteGraph& g, int k_max);

// Exports. JSON: {"graph_id", "k", "arithmetic", "entries": [[decimal strings]]}.
// CSV: a "# graph_id=... k=... arithmetic=..." line, then one row per matrix row.
std::string to_json(const WalkCountMatrix& m);
std::string to_csv(const WalkCountMatrix& m);
std::string to_json(const TransitionMatrix& m, const std::string& graph_id);
std::string to_csv(const TransitionMatrix& m, const std::string& graph_id);

}  // namespace nbwalk
