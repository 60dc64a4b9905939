#pragma once

#include <cstddef>
#include <string_view>

namespace nbwalk {

// Size limits for the exponential or memory-hungry paths. Defaults are
// desk-scale; NBWALK_BUDGET overrides them at the CLI.
struct Budgets {
    std::size_t max_vertices = 1'000'000;      // torus construction
    std::size_t oracle_depth = 12;             // DFS walk-enumeration depth
    std::size_t oracle_vertices = 50;          // DFS oracle graph size
    std::size_t dp_states = 3 * 33 * 33 * 33;  // lattice DP: d*(2k+1)^d at d=3, k=16
    std::size_t dp_max_dim = 3;

    // Parses "key=value[,key=value...]" with keys vertices, oracle_depth,
    // oracle_vertices, dp_states, dp_max_dim. A bare integer sets vertices.
    // Throws InvalidArgument on malformed text.
    static Budgets parse(std::string_view text);

    // Defaults overridden by the NBWALK_BUDGET environment variable if set.
    static Budgets from_env();
};

}  // namespace nbwalk
