// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nbwalk/cheb_poly.hpp"
#include "nbwalk/graph.hpp"
#include "nbwalk/lattice.hpp"
#include "nbwalk/nb_matrix.hpp"
#include "nbwalk/walk_sim.hpp"

using namespace nbwalk;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

void criterion(const char* id, const char* title, double time_limit, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = time_limit <= 0 || elapsed < time_limit;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::string limit = time_limit > 0 ? fmt(" limit %.0fs", time_limit) : "";
    std::printf("%s %-4s %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), elapsed,
                limit.c_str());
    std::fflush(stdout);
}

FiniteGraph petersen_sized_random(std::mt19937_64& rng, std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v < n; ++v) edges.emplace_back(std::uniform_int_distribution<Vertex>(0, v - 1)(rng), v);
    std::bernoulli_distribution coin(0.3);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return FiniteGraph::from_edges(n, edges);
}

}  // namespace

int main() {
    criterion("1", "exact Z^2 closed NB counts, three paths", 10, [] {
        bool ok = true;
        int first_bad = -1;
        for (int n = 1; n <= 16; ++n) {
            auto sum = nb_closed_count_z2_sum(n);
            bool agree = sum == nb_closed_count_z2_trinomial(n) && sum == lattice_dp_oracle(2, 2 * n);
            if (!agree && first_bad < 0) first_bad = n;
            ok = ok && agree;
        }
        ok = ok && nb_closed_count_z2_sum(1) == 0 && nb_closed_count_z2_sum(2) == 8 && nb_closed_count_z2_sum(3) == 40;
        return Outcome{ok, fmt("n=1..16 sum=trinomial=dp, starts 0,8,40; n=16 -> %s%s",
                               to_decimal(nb_closed_count_z2_trinomial(16)).c_str(),
                               first_bad < 0 ? "" : fmt(", first mismatch n=%d", first_bad).c_str())};
    });

    criterion("2", "trinomial square identity", 5, [] {
        int bad = 0;
        for (int n = 0; n <= 200; ++n) bad += !sun_identity_check(n).pass();
        return Outcome{bad == 0, fmt("n=0..200 exact, %d mismatches", bad)};
    });

    criterion("3", "recurrence = generating function = DFS = regular closed form", 60, [] {
        std::vector<std::pair<std::string, FiniteGraph>> graphs{{"C3", build_cycle(3)},
                                                                {"C5", build_cycle(5)},
                                                                {"K4", build_complete(4)},
                                                                {"K5", build_complete(5)},
                                                                {"torus(5,2)", build_torus({5, 2})}};
        std::mt19937_64 rng(1234);
        for (int i = 0; i < 6; ++i) graphs.emplace_back("random" + std::to_string(i), petersen_sized_random(rng, 10));
        const int k_max = 10;
        std::size_t compared = 0, regular = 0;
        std::string bad;
        for (const auto& [name, g] : graphs) {
            auto rec = nb_counts(g, k_max);
            auto gf = gen_func_counts(g, k_max);
            bool ok = true;
            for (Vertex u = 0; u < g.vertex_count(); ++u) {
                auto dfs = nb_counts_brute_force_table(g, u, k_max);
                for (int k = 0; k <= k_max; ++k)
                    for (Vertex v = 0; v < g.vertex_count(); ++v) {
                        ok = ok && rec[k].entries(u, v) == gf[k].entries(u, v) && rec[k].entries(u, v) == dfs[k][v];
                        ++compared;
                    }
            }
            if (g.regular_degree()) {
                ++regular;
                for (int k = 0; k <= k_max; ++k) ok = ok && nb_counts_regular_closed_form(g, k).entries == rec[k].entries;
            }
            if (!ok) bad += " " + name;
        }
        return Outcome{bad.empty(), fmt("%zu graphs (%zu regular), k<=10, %zu entries%s", graphs.size(), regular,
                                        compared, bad.empty() ? "" : (", mismatch:" + bad).c_str())};
    });

    criterion("4", "torus diagonal equals Z^2 count while 2k < n", 0, [] {
        bool ok = true;
        for (int k = 1; k <= 5; ++k) {
            for (std::size_t n : {static_cast<std::size_t>(2 * k + 1), std::size_t{11}}) {
                auto g = build_torus({n, 2});
                auto col = nb_count_column(g, 0, 2 * k);
                ok = ok && col[2 * k][0] == nb_closed_count_z2_trinomial(k);
            }
        }
        return Outcome{ok, "k=1..5 on torus(2k+1,2) and torus(11,2), exact"};
    });

    criterion("5", "spectral average = trace of NB transition matrix", 0, [] {
        double worst = 0.0;
        int checked = 0;
        for (TorusSpec spec : {TorusSpec{7, 2}, TorusSpec{5, 3}}) {
            auto g = build_torus(spec);
            const int k_max = static_cast<int>((spec.side - 1) / 2);
            auto rows = spectral_return_probs(torus_spectrum(spec), k_max);
            auto trans = nb_transition(g, 2 * k_max);
            for (int k = 1; k <= k_max; ++k) {
                Rational trace = 0;
                for (Vertex v = 0; v < g.vertex_count(); ++v) trace += trans[2 * k].entries(v, v);
                trace /= static_cast<unsigned long>(g.vertex_count());
                worst = std::max(worst, std::abs(rows[k].nb - to_double(trace)));
                ++checked;
            }
        }
        return Outcome{worst < 1e-10, fmt("torus(7,2), torus(5,3), %d values, max |diff| = %.3g (tol 1e-10)",
                                          checked, worst)};
    });

    criterion("6", "regime closed forms vs recurrence; r=2 Chebyshev", 0, [] {
        double worst_far = 0.0, worst_near = 0.0, worst_cheb = 0.0;
        for (int r = 3; r <= 10; ++r) {
            for (double x : bound_sweep_grid(r, 1000)) {
                const bool near = std::abs(r * r * x * x - 4.0 * (r - 1)) < 1e-6;
                for (int k = 0; k <= 100; ++k) {
                    double rec = static_cast<double>(p_eval_recurrence({r, k}, static_cast<long double>(x)));
                    double err = std::abs(p_eval_closed_form({r, k}, x) - rec) / std::max(1.0, std::abs(rec));
                    (near ? worst_near : worst_far) = std::max(near ? worst_near : worst_far, err);
                }
            }
        }
        for (int i = 0; i <= 1000; ++i) {
            double t = std::numbers::pi * i / 1000.0;
            for (int k = 0; k <= 100; ++k) {
                worst_cheb = std::max(worst_cheb, std::abs(p_eval_closed_form({2, k}, std::cos(t)) - std::cos(k * t)));
                worst_cheb = std::max(worst_cheb, std::abs(p_eval_recurrence({2, k}, std::cos(t)) - std::cos(k * t)));
            }
        }
        bool ok = worst_far <= 1e-9 && worst_near <= 1e-6 && worst_cheb <= 1e-10;
        return Outcome{ok, fmt("r=3..10, k<=100, 1000 pts: rel err %.3g (tol 1e-9), near critical %.3g (tol 1e-6); "
                               "r=2 vs cos(kt) %.3g (tol 1e-10)",
                               worst_far, worst_near, worst_cheb)};
    });

    criterion("7", "eigenvalue bounds with C_r = 2", 0, [] {
        const int degrees[] = {3, 4, 5, 6, 7, 8};
        auto s = bound_sweep(degrees, 200, 10000, 2.0);
        bool ok = s.pass() && s.min_margin_supercritical >= 0.0;
        return Outcome{ok, fmt("r=3..8, k<=200, 10^4 pts: %zu checks, %zu failures, min supercritical margin %.3g",
                               s.checked, s.failures, s.min_margin_supercritical)};
    });

    criterion("8", "trinomial and NB return asymptotics", 30, [] {
        TrinomialTable t(5000);
        double e100 = trinomial_asymptotic_error(100, t[100]);
        std::string ratios;
        bool ratios_ok = true;
        double previous = trinomial_asymptotic_error(25, t[25]);
        for (int n : {50, 100, 200}) {
            double e = trinomial_asymptotic_error(n, t[n]);
            ratios += fmt(" %.3f", e / previous);
            ratios_ok = ratios_ok && e / previous > 0.2 && e / previous < 0.3;
            previous = e;
        }
        const int k = 5000;
        Rational p(t[k] * t[k] - t[k - 1] * t[k - 1], BigInt(4) * power(3, 2 * k - 1));
        p.canonicalize();
        double scaled = to_double(p * 2 * k) * std::numbers::pi;
        bool ok = e100 < 2e-5 && ratios_ok && scaled >= 0.99 && scaled <= 1.01;
        return Outcome{ok, fmt("rel err n=100 %.3g (tol 2e-5); doubling ratios%s (expect ~1/4); "
                               "p~(2k)*2pi*k at k=5000 = %.6f",
                               e100, ratios.c_str(), scaled)};
    });

    auto nb2 = std::make_shared<ReturnSeries>();
    criterion("9a", "d=2 NB partial sums grow like ln(k)/(2 pi)", 0, [&] {
        *nb2 = nb_return_series(2, 10000);
        double slope = log_slope(*nb2, 100, 10000);
        double rel = std::abs(slope * 2 * std::numbers::pi - 1.0);
        return Outcome{rel <= 0.2, fmt("slope over k=100..10000 = %.5f vs 1/(2pi) = %.5f, rel dev %.3g (tol 0.2)",
                                       slope, 1 / (2 * std::numbers::pi), rel)};
    });

    criterion("9b", "d=3 NB partial sums have tail < 1e-3 by k=200", 0, [] {
        auto nb3 = nb_return_series(3, 200);
        auto tail = power_law_tail(nb3, 200);
        return Outcome{tail.tail < 1e-3,
                       fmt("S_200 = %.6f, fit p~(2k) ~ %.4f k^-%.3f, estimated tail %.4g (tol 1e-3)",
                           nb3.entries.back().partial_sum, tail.constant, tail.exponent, tail.tail)};
    });

    criterion("9c", "d=1 NB series is exactly 0", 0, [] {
        auto nb1 = nb_return_series(1, 1000);
        Rational sum = 0;
        for (const auto& e : nb1.entries) sum += e.prob;
        return Outcome{sum == 0, "k=1..1000, exact sum " + to_fraction(sum)};
    });

    criterion("10", "Monte Carlo calibration of p~(4) on Z^2", 120, [] {
        const double exact = 2.0 / 27.0;
        int covered = 0, z_ok = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SimConfig c;
            c.mode = WalkMode::nb;
            c.dimension = 2;
            c.trials = 1000000;
            c.max_steps = 4;
            c.seed = seed;
            auto stats = simulate_walks(c);
            auto ci = stats.interval(4);
            covered += ci.low <= exact && exact <= ci.high;
            double p = stats.estimate(4);
            double se = std::sqrt(exact * (1 - exact) / static_cast<double>(c.trials));
            z_ok += std::abs(p - exact) / se < 4;
        }
        SimConfig c;
        c.mode = WalkMode::nb;
        c.dimension = 2;
        c.trials = 1000000;
        c.max_steps = 4;
        c.seed = 7;
        auto a = simulate_walks(c);
        c.workers = 4;
        auto b = simulate_walks(c);
        bool same = a == b && a == simulate_walks(c);
        return Outcome{covered >= 18 && z_ok >= 19 && same,
                       fmt("10^6 trials x 20 seeds: %d/20 Wilson intervals cover 2/27 (need 18), |z|<4 in %d/20, "
                           "repeat runs %s",
                           covered, z_ok, same ? "identical" : "DIFFER")};
    });

    criterion("11", "exact NB return probability never exceeds simple", 0, [] {
        auto d2 = conjecture_probe(2, 32, 0, 0);
        auto d3 = conjecture_probe(3, 16, 0, 0);
        std::string flagged;
        for (const auto* rep : {&d2, &d3})
            for (const auto& row : rep->rows)
                if (row.violation) flagged += fmt(" d=%d,k=%d", rep->dimension, row.k);
        return Outcome{d2.violations + d3.violations == 0,
                       fmt("d=2 k<=32, d=3 k<=16: %zu violations%s", d2.violations + d3.violations,
                           flagged.empty() ? "" : (", FLAGGED:" + flagged).c_str())};
    });

    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
