#include "wtg/solver.hpp"
#include "wtg/error.hpp"

namespace wtg {

Region Solution::cell_region(int cell) const {
    const Cell& c = cells.cells.at(cell);
    Rational base = floor_q(c.lo);
    long d = base.get_num().get_si();
    if (c.point() && c.lo == base) return Region{{d}, {}};
    return Region{{d}, {{0}}};
}

int Solution::pruned_state(int location, int cell) const { return pruned.find(location, cell_region(cell)); }
int Solution::full_state(int location, int cell) const { return full.find(location, cell_region(cell)); }

Sign Solution::scc_sign(int location, int cell) const {
    int s = full_state(location, cell);
    if (s < 0) return Sign::Trivial;
    return divergence.signs.at(scc.scc_of[s]).sign;
}

Solution solve_game(const GameDef& g, const SolveOptions& opt) {
    Solution sol;
    validate_game(g);
    require_one_clock(g, "values");
    sol.game = g;
    sol.bounds = g.weight_bounds();
    sol.full = build_region_game(g);
    sol.scc = scc_decompose(sol.full);
    sol.divergence = check_divergence(sol.full, sol.scc, opt.cycle_cap);
    sol.classes = classify_values(sol.full, sol.scc, sol.divergence);
    sol.pruned = prune_game(sol.full, sol.classes);
    sol.iteration = value_iterate(sol.pruned, initial_value(sol.full, sol.classes), opt.max_iters);
    if (!sol.iteration.converged)
        throw Error("values", "not_converged",
                    "no fixpoint after " + std::to_string(sol.iteration.iterations) +
                        " iterations; last gap " + sol.iteration.last_gap.str());
    sol.value = sol.iteration.value;
    sol.cells = extract_cells(sol.value);
    return sol;
}

}  // namespace wtg
