#include "nbwalk/walk_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "nbwalk/errors.hpp"
#include "nbwalk/lattice.hpp"
#include "nbwalk/parallel.hpp"

namespace nbwalk {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint32_t kNoDirection = ~std::uint32_t{0};

std::uint32_t uniform_below(SplitMix64& rng, std::uint32_t bound) {
    return std::uniform_int_distribution<std::uint32_t>(0, bound - 1)(rng);
}

// Direction 2a is +e_a, 2a+1 is -e_a.
std::uint32_t next_direction(SplitMix64& rng, WalkMode mode, std::uint32_t dirs, std::uint32_t previous) {
    if (mode == WalkMode::simple || previous == kNoDirection) return uniform_below(rng, dirs);
    const std::uint32_t reverse = previous ^ 1u;
    std::uint32_t pick = uniform_below(rng, dirs - 1);
    return pick >= reverse ? pick + 1 : pick;
}

// Returns the index of the next vertex, or nullopt when an NB walk is stuck.
std::optional<Vertex> next_vertex(SplitMix64& rng, WalkMode mode, const FiniteGraph& g, Vertex at,
                                  std::optional<Vertex> previous) {
    auto nbrs = g.neighbors(at);
    if (nbrs.empty()) return std::nullopt;
    if (mode == WalkMode::simple || !previous) return nbrs[uniform_below(rng, static_cast<std::uint32_t>(nbrs.size()))];
    if (nbrs.size() == 1) return std::nullopt;
    const auto skip = static_cast<std::uint32_t>(std::lower_bound(nbrs.begin(), nbrs.end(), *previous) - nbrs.begin());
    std::uint32_t pick = uniform_below(rng, static_cast<std::uint32_t>(nbrs.size() - 1));
    return nbrs[pick >= skip ? pick + 1 : pick];
}

void validate(const SimConfig& c) {
    if (c.trials == 0) throw InvalidArgument("simulation needs at least one trial");
    if (c.max_steps == 0) throw InvalidArgument("simulation needs at least one step");
    if ((c.dimension >= 1) == static_cast<bool>(c.graph)) {
        throw InvalidArgument("simulation needs exactly one of a lattice dimension or a graph");
    }
    if (c.dimension < 0) throw InvalidArgument("dimension must be >= 1");
    if (c.graph && c.start >= c.graph->vertex_count()) throw InvalidArgument("start vertex out of range");
}

struct Tally {
    std::vector<std::uint64_t> at_origin;
    std::vector<std::uint64_t> first_return;
};

void run_lattice_trial(const SimConfig& c, std::uint64_t trial, Tally& t, std::vector<std::int64_t>& pos) {
    auto rng = SplitMix64::for_trial(c.seed, trial);
    const auto dirs = static_cast<std::uint32_t>(2 * c.dimension);
    std::fill(pos.begin(), pos.end(), 0);
    std::size_t nonzero = 0;
    std::uint32_t previous = kNoDirection;
    bool returned = false;
    for (std::size_t step = 1; step <= c.max_steps; ++step) {
        const std::uint32_t dir = next_direction(rng, c.mode, dirs, previous);
        assert(c.mode == WalkMode::simple || previous == kNoDirection || dir != (previous ^ 1u));
        auto& x = pos[dir / 2];
        const bool was_zero = x == 0;
        x += (dir & 1u) ? -1 : 1;
        if (was_zero) ++nonzero;
        else if (x == 0) --nonzero;
        previous = dir;
        if (nonzero == 0) {
            ++t.at_origin[step];
            if (!returned) {
                ++t.first_return[step];
                returned = true;
            }
        }
    }
}

void run_graph_trial(const SimConfig& c, std::uint64_t trial, Tally& t) {
    auto rng = SplitMix64::for_trial(c.seed, trial);
    Vertex at = c.start;
    std::optional<Vertex> previous;
    bool returned = false;
    for (std::size_t step = 1; step <= c.max_steps; ++step) {
        auto next = next_vertex(rng, c.mode, *c.graph, at, previous);
        if (!next) return;
        assert(c.mode == WalkMode::simple || !previous || *next != *previous);
        previous = at;
        at = *next;
        if (at == c.start) {
            ++t.at_origin[step];
            if (!returned) {
                ++t.first_return[step];
                returned = true;
            }
        }
    }
}

}  // namespace

SplitMix64 SplitMix64::for_trial(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 mixer(seed);
    const std::uint64_t base = mixer();
    SplitMix64 keyed(base ^ (trial * 0xd1b54a32d192ed03ull));
    return SplitMix64(keyed());
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

double ReturnStats::estimate(std::size_t k) const {
    return static_cast<double>(at_origin.at(k)) / static_cast<double>(trials);
}

Interval ReturnStats::interval(std::size_t k) const { return wilson_interval(at_origin.at(k), trials); }

ReturnStats simulate_walks(const SimConfig& config) {
    validate(config);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(config.workers, config.trials));
    std::vector<Tally> partial(workers, Tally{std::vector<std::uint64_t>(config.max_steps + 1, 0),
                                              std::vector<std::uint64_t>(config.max_steps + 1, 0)});

    detail::parallel_for(workers, workers, [&](std::size_t w) {
        const std::uint64_t begin = config.trials * w / workers;
        const std::uint64_t end = config.trials * (w + 1) / workers;
        std::vector<std::int64_t> pos(static_cast<std::size_t>(std::max(config.dimension, 0)));
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            if (config.graph) run_graph_trial(config, trial, partial[w]);
            else run_lattice_trial(config, trial, partial[w], pos);
        }
    });

    ReturnStats stats;
    stats.trials = config.trials;
    stats.max_steps = config.max_steps;
    stats.at_origin.assign(config.max_steps + 1, 0);
    stats.first_return.assign(config.max_steps + 1, 0);
    stats.at_origin[0] = config.trials;
    for (const auto& t : partial) {
        for (std::size_t k = 1; k <= config.max_steps; ++k) {
            stats.at_origin[k] += t.at_origin[k];
            stats.first_return[k] += t.first_return[k];
        }
    }
    return stats;
}

ReturnByEstimate return_by(const ReturnStats& stats, std::size_t horizon) {
    if (horizon > stats.max_steps) throw InvalidArgument("horizon exceeds simulated steps");
    std::uint64_t hits = 0;
    for (std::size_t k = 1; k <= horizon; ++k) hits += stats.first_return[k];
    return {horizon, static_cast<double>(hits) / static_cast<double>(stats.trials),
            wilson_interval(hits, stats.trials)};
}

ReturnByEstimate estimate_return_by(const SimConfig& config, std::size_t horizon) {
    if (horizon > config.max_steps) throw InvalidArgument("horizon exceeds max_steps");
    return return_by(simulate_walks(config), horizon);
}

std::vector<std::vector<std::int64_t>> sample_lattice_trajectory(const SimConfig& config, std::uint64_t trial) {
    validate(config);
    if (config.graph) throw InvalidArgument("configuration describes a graph walk");
    auto rng = SplitMix64::for_trial(config.seed, trial);
    const auto dirs = static_cast<std::uint32_t>(2 * config.dimension);
    std::vector<std::vector<std::int64_t>> path{std::vector<std::int64_t>(static_cast<std::size_t>(config.dimension))};
    std::uint32_t previous = kNoDirection;
    for (std::size_t step = 1; step <= config.max_steps; ++step) {
        const std::uint32_t dir = next_direction(rng, config.mode, dirs, previous);
        auto pos = path.back();
        pos[dir / 2] += (dir & 1u) ? -1 : 1;
        path.push_back(std::move(pos));
        previous = dir;
    }
    return path;
}

std::vector<Vertex> sample_graph_trajectory(const SimConfig& config, std::uint64_t trial) {
    validate(config);
    if (!config.graph) throw InvalidArgument("configuration describes a lattice walk");
    auto rng = SplitMix64::for_trial(config.seed, trial);
    std::vector<Vertex> path{config.start};
    std::optional<Vertex> previous;
    for (std::size_t step = 1; step <= config.max_steps; ++step) {
        auto next = next_vertex(rng, config.mode, *config.graph, path.back(), previous);
        if (!next) break;
        previous = path.back();
        path.push_back(*next);
    }
    return path;
}

ConjectureReport conjecture_probe(int d, int k_max, std::uint64_t trials, std::uint64_t seed, std::size_t workers) {
    if (d < 1) throw InvalidArgument("dimension must be >= 1");
    if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
    const auto nb = nb_return_series(d, k_max);
    const auto simple = simple_return_series(d, k_max);

    std::optional<ReturnStats> sim_nb, sim_simple;
    if (trials > 0) {
        SimConfig config;
        config.trials = trials;
        config.max_steps = 2 * static_cast<std::size_t>(k_max);
        config.seed = seed;
        config.workers = workers;
        config.dimension = d;
        config.mode = WalkMode::nb;
        sim_nb = simulate_walks(config);
        config.mode = WalkMode::simple;
        sim_simple = simulate_walks(config);
    }

    ConjectureReport report;
    report.dimension = d;
    for (int k = 1; k <= k_max; ++k) {
        ConjectureRow row;
        row.k = k;
        row.exact_nb = nb.entries[static_cast<std::size_t>(k - 1)].prob;
        row.exact_simple = simple.entries[static_cast<std::size_t>(k - 1)].prob;
        row.violation = row.exact_nb > row.exact_simple;
        if (sim_nb) {
            const auto step = static_cast<std::size_t>(2 * k);
            row.empirical_nb = sim_nb->estimate(step);
            row.empirical_simple = sim_simple->estimate(step);
            row.interval_nb = sim_nb->interval(step);
            row.interval_simple = sim_simple->interval(step);
        }
        if (row.violation) ++report.violations;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace nbwalk
