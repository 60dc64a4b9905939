#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "nbwalk/bigint.hpp"
#include "nbwalk/graph.hpp"

namespace nbwalk {

// SplitMix64. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Independent stream for one trial; depends only on (seed, trial).
    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial);

private:
    std::uint64_t state_;
};

enum class WalkMode { simple, nb };

struct SimConfig {
    WalkMode mode = WalkMode::nb;
    std::uint64_t trials = 1;
    std::size_t max_steps = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    // Exactly one walk domain: the lattice Z^dimension (dimension >= 1), or
    // a finite graph starting at `start`.
    int dimension = 0;
    std::shared_ptr<const FiniteGraph> graph;
    Vertex start = 0;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval at 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct ReturnStats {
    std::uint64_t trials = 0;
    std::size_t max_steps = 0;
    std::vector<std::uint64_t> at_origin;     // [k]: trials at the start after exactly k steps
    std::vector<std::uint64_t> first_return;  // [k]: trials whose first return is at step k

    double estimate(std::size_t k) const;
    Interval interval(std::size_t k) const;

    bool operator==(const ReturnStats&) const = default;
};

// Runs `trials` independent walks of max_steps steps. Trial i draws from
// SplitMix64::for_trial(seed, i), so output is identical for any worker count.
// NB walks on a finite graph that reach a degree-1 vertex stop there.
// Throws InvalidArgument for zero trials/steps or an ill-formed domain.
ReturnStats simulate_walks(const SimConfig& config);

struct ReturnByEstimate {
    std::size_t horizon = 0;
    double probability = 0.0;
    Interval interval;
};

// Fraction of trials whose first return happens at or before `horizon`.
ReturnByEstimate return_by(const ReturnStats& stats, std::size_t horizon);
ReturnByEstimate estimate_return_by(const SimConfig& config, std::size_t horizon);

// Full path of trial `trial` under `config`: lattice coordinates, one vector per step.
std::vector<std::vector<std::int64_t>> sample_lattice_trajectory(const SimConfig& config, std::uint64_t trial);
std::vector<Vertex> sample_graph_trajectory(const SimConfig& config, std::uint64_t trial);

struct ConjectureRow {
    int k = 0;  // walk length 2k
    Rational exact_nb;
    Rational exact_simple;
    double empirical_nb = 0.0;
    double empirical_simple = 0.0;
    Interval interval_nb;
    Interval interval_simple;
    bool violation = false;  // exact_nb > exact_simple
};

struct ConjectureReport {
    int dimension = 0;
    std::vector<ConjectureRow> rows;
    std::size_t violations = 0;
};

// Compares NB and simple return probabilities on Z^d for 2k <= 2 k_max,
// exactly and by simulation. trials == 0 skips the simulation columns.
ConjectureReport conjecture_probe(int d, int k_max, std::uint64_t trials, std::uint64_t seed,
                                  std::size_t workers = 1);

}  // namespace nbwalk
