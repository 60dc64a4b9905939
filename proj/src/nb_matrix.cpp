#include "nbwalk/nb_matrix.hpp"

#include <json.hpp>

#include <sstream>

#include "nbwalk/errors.hpp"
#include "nbwalk/parallel.hpp"

namespace nbwalk {

namespace {

void require_nonnegative(int k) {
    if (k < 0) throw InvalidArgument("step count must be nonnegative, got " + std::to_string(k));
}

std::size_t require_regular(const FiniteGraph& g) {
    auto r = g.regular_degree();
    if (!r) throw RegularityError("graph is not regular");
    return *r;
}

// out(u, v) = sum_{w ~ u} m(w, v), rows computed independently.
template <typename T>
Matrix<T> adjacency_times(const FiniteGraph& g, const Matrix<T>& m) {
    const std::size_t n = g.vertex_count();
    Matrix<T> out(n, n);
    detail::parallel_for(n, detail::default_workers(), [&](std::size_t u) {
        for (Vertex w : g.neighbors(static_cast<Vertex>(u)))
            for (std::size_t v = 0; v < n; ++v) out(u, v) += m(w, v);
    });
    return out;
}

WalkCountMatrix wrap(std::size_t step, Matrix<BigInt> entries, const std::string& id) {
    return WalkCountMatrix{step, std::move(entries), id};
}

}  // namespace

Matrix<double> TransitionMatrix::to_double() const {
    Matrix<double> out(entries.rows(), entries.cols());
    for (std::size_t i = 0; i < entries.rows(); ++i)
        for (std::size_t j = 0; j < entries.cols(); ++j) out(i, j) = nbwalk::to_double(entries(i, j));
    return out;
}

std::vector<WalkCountMatrix> nb_counts(const FiniteGraph& g, int k_max) {
    require_nonnegative(k_max);
    const std::size_t n = g.vertex_count();
    const std::string id = g.id();

    std::vector<WalkCountMatrix> out;
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    out.push_back(wrap(0, Matrix<BigInt>::identity(n), id));
    if (k_max >= 1) out.push_back(wrap(1, g.adjacency_matrix<BigInt>(), id));
    if (k_max >= 2) {
        auto a2 = adjacency_times(g, out[1].entries);
        for (Vertex v = 0; v < n; ++v) a2(v, v) -= static_cast<unsigned long>(g.degree(v));
        out.push_back(wrap(2, std::move(a2), id));
    }
    for (std::size_t k = 3; k <= static_cast<std::size_t>(k_max); ++k) {
        auto next = adjacency_times(g, out[k - 1].entries);
        const auto& prev2 = out[k - 2].entries;
        detail::parallel_for(n, detail::default_workers(), [&](std::size_t u) {
            const long excess = static_cast<long>(g.degree(static_cast<Vertex>(u))) - 1;
            if (excess == 0) return;
            for (std::size_t v = 0; v < n; ++v) next(u, v) -= excess * prev2(u, v);
        });
        out.push_back(wrap(k, std::move(next), id));
    }
    return out;
}

std::vector<std::vector<BigInt>> nb_count_column(const FiniteGraph& g, Vertex target, int k_max) {
    require_nonnegative(k_max);
    const std::size_t n = g.vertex_count();
    if (target >= n) throw InvalidArgument("target vertex out of range");

    std::vector<std::vector<BigInt>> cols;
    auto step = [&](const std::vector<BigInt>& prev) {
        std::vector<BigInt> next(n);
        for (Vertex u = 0; u < n; ++u)
            for (Vertex w : g.neighbors(u)) next[u] += prev[w];
        return next;
    };
    std::vector<BigInt> e(n);
    e[target] = 1;
    cols.push_back(e);
    if (k_max >= 1) cols.push_back(step(cols[0]));
    if (k_max >= 2) {
        auto c2 = step(cols[1]);
        c2[target] -= static_cast<unsigned long>(g.degree(target));
        cols.push_back(std::move(c2));
    }
    for (std::size_t k = 3; k <= static_cast<std::size_t>(k_max); ++k) {
        auto next = step(cols[k - 1]);
        for (Vertex u = 0; u < n; ++u) next[u] -= (static_cast<long>(g.degree(u)) - 1) * cols[k - 2][u];
        cols.push_back(std::move(next));
    }
    return cols;
}

std::vector<std::vector<BigInt>> nb_counts_brute_force_table(const FiniteGraph& g, Vertex u, int k_max,
                                                            const Budgets& budgets) {
    require_nonnegative(k_max);
    if (static_cast<std::size_t>(k_max) > budgets.oracle_depth) {
        throw OracleBudgetError("DFS oracle depth " + std::to_string(k_max) + " exceeds budget " +
                                std::to_string(budgets.oracle_depth));
    }
    if (g.vertex_count() > budgets.oracle_vertices) {
        throw OracleBudgetError("DFS oracle graph size " + std::to_string(g.vertex_count()) + " exceeds budget " +
                                std::to_string(budgets.oracle_vertices));
    }
    if (u >= g.vertex_count()) throw InvalidArgument("start vertex out of range");

    const std::size_t depth = static_cast<std::size_t>(k_max);
    std::vector<std::vector<std::uint64_t>> hits(depth + 1, std::vector<std::uint64_t>(g.vertex_count(), 0));

    // Explicit stack of (vertex, previous vertex or none, length so far).
    constexpr Vertex kNone = ~Vertex{0};
    struct Frame {
        Vertex at;
        Vertex prev;
        std::size_t length;
    };
    std::vector<Frame> stack{{u, kNone, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        ++hits[f.length][f.at];
        if (f.length == depth) continue;
        for (Vertex next : g.neighbors(f.at)) {
            if (next == f.prev) continue;
            stack.push_back({next, f.at, f.length + 1});
        }
    }

    std::vector<std::vector<BigInt>> out(depth + 1, std::vector<BigInt>(g.vertex_count()));
    for (std::size_t k = 0; k <= depth; ++k)
        for (std::size_t v = 0; v < g.vertex_count(); ++v) out[k][v] = static_cast<unsigned long>(hits[k][v]);
    return out;
}

BigInt nb_counts_brute_force(const FiniteGraph& g, Vertex u, Vertex v, int k, const Budgets& budgets) {
    if (v >= g.vertex_count()) throw InvalidArgument("end vertex out of range");
    return nb_counts_brute_force_table(g, u, k, budgets)[static_cast<std::size_t>(k)][v];
}

std::vector<WalkCountMatrix> gen_func_counts(const FiniteGraph& g, int k_max) {
    require_nonnegative(k_max);
    const std::size_t n = g.vertex_count();
    const std::string id = g.id();

    // Denominator Q(x) = Q0 + Q1 x + Q2 x^2 with Q0 = I; numerator N(x) = I - x^2 I.
    Matrix<BigInt> q1 = g.adjacency_matrix<BigInt>();
    q1.scale(BigInt(-1));
    Matrix<BigInt> q2(n, n);
    for (Vertex v = 0; v < n; ++v) q2(v, v) = static_cast<long>(g.degree(v)) - 1;

    std::vector<WalkCountMatrix> out;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(k_max); ++k) {
        Matrix<BigInt> s(n, n);
        if (k == 0) s = Matrix<BigInt>::identity(n);
        if (k == 2) s -= Matrix<BigInt>::identity(n);
        if (k >= 1) s -= q1 * out[k - 1].entries;
        if (k >= 2) s -= q2 * out[k - 2].entries;
        out.push_back(wrap(k, std::move(s), id));
    }
    return out;
}

WalkCountMatrix nb_counts_regular_closed_form(const FiniteGraph& g, int n) {
    require_nonnegative(n);
    const long r = static_cast<long>(require_regular(g));
    const std::size_t size = g.vertex_count();

    std::vector<Matrix<BigInt>> powers{Matrix<BigInt>::identity(size)};
    const auto a = g.adjacency_matrix<BigInt>();
    for (int m = 1; m <= n; ++m) powers.push_back(powers.back() * a);

    Matrix<BigInt> result(size, size);
    auto accumulate = [&](int top, int sign) {
        // sign * sum_{i=0}^{floor(top/2)} (-1)^i C(top-i, i) (r-1)^i A^{top-2i}
        for (int i = 0; 2 * i <= top; ++i) {
            BigInt coeff = binomial(top - i, i) * power(r - 1, static_cast<unsigned long>(i));
            if ((i % 2 == 1) != (sign < 0)) coeff = -coeff;
            Matrix<BigInt> term = powers[static_cast<std::size_t>(top - 2 * i)];
            term.scale(coeff);
            result += term;
        }
    };
    accumulate(n, +1);
    if (n >= 2) accumulate(n - 2, -1);
    return wrap(static_cast<std::size_t>(n), std::move(result), g.id());
}

std::vector<TransitionMatrix> nb_transition(const FiniteGraph& g, int k_max) {
    require_nonnegative(k_max);
    const std::size_t r = require_regular(g);
    if (r < 2) throw UnsupportedDegree("NB transition needs degree >= 2, got " + std::to_string(r));
    const std::size_t n = g.vertex_count();

    const Rational inv_r(1, static_cast<unsigned long>(r));
    const Rational lead(static_cast<unsigned long>(r), static_cast<unsigned long>(r - 1));
    const Rational tail(1, static_cast<unsigned long>(r - 1));

    std::vector<TransitionMatrix> out;
    out.push_back({0, Matrix<Rational>::identity(n), r});
    for (std::size_t k = 1; k <= static_cast<std::size_t>(k_max); ++k) {
        Matrix<Rational> next = adjacency_times(g, out[k - 1].entries);
        if (k == 1) {
            next.scale(inv_r);
        } else {
            // r/(r-1) * (A/r) M = M' / (r-1) where M' = A M.
            next.scale(lead * inv_r);
            const auto& prev2 = out[k - 2].entries;
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v = 0; v < n; ++v)
                    if (prev2(u, v) != 0) next(u, v) -= tail * prev2(u, v);
        }
        out.push_back({k, std::move(next), r});
    }
    return out;
}

std::string to_json(const WalkCountMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.entries.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.entries.cols(); ++j) row.push_back(to_decimal(m.entries(i, j)));
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"graph_id", m.graph_id}, {"k", m.step}, {"arithmetic", "exact-integer"}, {"entries", rows}};
    return doc.dump();
}

std::string to_csv(const WalkCountMatrix& m) {
    std::ostringstream out;
    out << "# graph_id=" << m.graph_id << " k=" << m.step << " arithmetic=exact-integer\n";
    for (std::size_t i = 0; i < m.entries.rows(); ++i) {
        for (std::size_t j = 0; j < m.entries.cols(); ++j) out << (j ? "," : "") << to_decimal(m.entries(i, j));
        out << '\n';
    }
    return out.str();
}

std::string to_json(const TransitionMatrix& m, const std::string& graph_id) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.entries.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.entries.cols(); ++j) row.push_back(to_fraction(m.entries(i, j)));
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"graph_id", graph_id},
                       {"k", m.step},
                       {"regular_degree", m.regular_degree},
                       {"arithmetic", "exact-rational"},
                       {"entries", rows}};
    return doc.dump();
}

std::string to_csv(const TransitionMatrix& m, const std::string& graph_id) {
    std::ostringstream out;
    out << "# graph_id=" << graph_id << " k=" << m.step << " arithmetic=exact-rational\n";
    for (std::size_t i = 0; i < m.entries.rows(); ++i) {
        for (std::size_t j = 0; j < m.entries.cols(); ++j) out << (j ? "," : "") << to_fraction(m.entries(i, j));
        out << '\n';
    }
    return out.str();
}

}  // namespace nbwalk
