#pragma once

#include "wtg/analysis.hpp"
#include "wtg/pa_function.hpp"

#include <optional>
#include <vector>

namespace wtg {

// One piecewise-affine function of the clock per location, on [0, M].
// Region states outside the pruned game keep their classified value (+inf / -inf).
struct PAValue {
    long clock_bound = 0;
    std::vector<PAFunction> loc;

    ExtRational at(int location, const Rational& x) const { return loc.at(location).eval(x); }
    bool operator==(const PAValue&) const = default;
};

// Targets 0, everything else +inf except -inf states (which never change).
PAValue initial_value(const RegionGame& full, const ValueClassification& cls);

// One application of the one-step operator on the pruned region game.
PAValue apply_F(const RegionGame& pruned, const PAValue& v);

// The owner's best one-step cost of a single transition from every clock value
// of its source location, continuing with v. Unavailable points get +inf for a
// Min source and -inf for a Max source.
PAFunction transition_cost(const RegionGame& pruned, const PAValue& v, int transition);

struct ValueIterationResult {
    PAValue value;
    std::size_t iterations = 0;  // applications of F until the fixpoint was observed
    std::size_t max_iters = 0;
    bool converged = false;
    ExtRational last_gap;  // sup distance between the last two iterates
};

std::size_t default_max_iters(const RegionGame& pruned);
ValueIterationResult value_iterate(const RegionGame& pruned, const PAValue& v0,
                                   std::optional<std::size_t> max_iters = std::nullopt);

// ── Cells ────────────────────────────────────────────────────────────

struct Cell {
    Rational lo, hi;  // lo == hi for point cells
    bool point() const { return lo == hi; }
    bool contains(const Rational& x) const { return point() ? x == lo : (x > lo && x < hi); }
    Rational midpoint() const { return (lo + hi) / 2; }
    std::string str() const;
    bool operator==(const Cell&) const = default;
};

struct CellDecomposition {
    std::vector<std::vector<Rational>> breakpoints;  // per location, where the value stops being affine
    std::vector<Rational> knots;                     // common refinement with all region bounds
    std::vector<Cell> cells;                         // {k0}, (k0,k1), {k1}, ...
    std::size_t alpha_cells = 0;

    int cell_of(const Rational& x) const;
};

CellDecomposition extract_cells(const PAValue& v);

void require_one_clock(const GameDef& g, const char* stage);

}  // namespace wtg
