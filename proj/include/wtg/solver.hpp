#pragma once

#include "wtg/values.hpp"

#include <optional>

namespace wtg {

struct SolveOptions {
    std::optional<std::size_t> max_iters;
    std::size_t cycle_cap = kDefaultCycleCap;
};

// Everything the later stages need about one solved game.
struct Solution {
    GameDef game;
    RegionGame full;
    SccInfo scc;  // of `full`
    DivergenceReport divergence;
    ValueClassification classes;
    RegionGame pruned;
    ValueIterationResult iteration;
    PAValue value;
    CellDecomposition cells;
    WeightBounds bounds;

    // Region of a cell (one clock).
    Region cell_region(int cell) const;
    // Pruned region state holding (location, cell), or -1.
    int pruned_state(int location, int cell) const;
    int full_state(int location, int cell) const;
    // Sign of the full-game SCC containing (location, cell).
    Sign scc_sign(int location, int cell) const;
};

// validate -> region game -> SCCs -> divergence -> classification -> pruning
// -> value iteration -> cells. Throws wtg::Error tagged with the failing stage.
Solution solve_game(const GameDef& g, const SolveOptions& opt = {});

}  // namespace wtg
