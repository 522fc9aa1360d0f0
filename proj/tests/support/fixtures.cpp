#include "support/fixtures.hpp"

#include <map>

namespace wtg::testing {

std::string data_path(const std::string& file) { return std::string(WTG_DATA_DIR) + "/" + file; }

GameDef load_fixture(const std::string& file) { return load_game_file(data_path(file)); }

GameDef mixed_signs_loop_weight3() {
    GameDef g = load_fixture("mixed_signs.json");
    int l5 = g.location_index("l5");
    for (auto& t : g.transitions)
        if (t.from == l5 && t.to == l5) t.weight = 3;
    return g;
}

FunctionView divergent_series_strategy() {
    return FunctionView([](const Config& c, std::uint64_t) {
        const Rational& x = c.valuation[0];
        Rational i = 1 / (1 - x);
        Rational wait = 1 / i - 1 / (i + 1);
        Decision d;
        d.atoms.push_back({x, 0, wait, false});
        d.atoms.push_back({1 - x, 1, wait, false});
        return d;
    });
}

std::vector<ExtRational> grid_values(const Solution& sol, int location, const Rational& step, std::size_t horizon) {
    const GameDef& g = sol.game;
    const Rational M(g.clock_bound);
    std::vector<Rational> grid;
    for (Rational v = 0; v <= M; v += step) grid.push_back(v);
    std::map<Rational, std::size_t> at;
    for (std::size_t k = 0; k < grid.size(); ++k) at[grid[k]] = k;

    const std::size_t L = g.locations.size();
    std::vector<std::vector<bool>> kept(L, std::vector<bool>(grid.size()));
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t k = 0; k < grid.size(); ++k)
            kept[l][k] = sol.pruned.state_of(Config{static_cast<int>(l), {grid[k]}}) >= 0;

    std::vector<std::vector<ExtRational>> v(L);
    for (std::size_t l = 0; l < L; ++l)
        v[l].assign(grid.size(), g.is_target(static_cast<int>(l)) ? ExtRational(0) : ExtRational::pos_inf());

    for (std::size_t round = 0; round < horizon; ++round) {
        auto next = v;
        for (std::size_t l = 0; l < L; ++l) {
            if (g.is_target(static_cast<int>(l))) continue;
            const bool is_min = g.locations[l].owner == Owner::Min;
            const Rational rate(g.locations[l].rate);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (!kept[l][k]) continue;
                std::optional<ExtRational> best;
                for (int t : g.outgoing(static_cast<int>(l))) {
                    const Transition& tr = g.transitions[t];
                    for (std::size_t j = k; j < grid.size(); ++j) {
                        if (!tr.guard.satisfied({grid[j]})) continue;
                        std::size_t landing = tr.resets.empty() ? j : 0;
                        if (!kept[tr.to][landing]) continue;
                        ExtRational cost = ExtRational(rate * (grid[j] - grid[k]) + Rational(tr.weight)) + v[tr.to][landing];
                        if (!best) best = cost;
                        else best = is_min ? ext_min(*best, cost) : ext_max(*best, cost);
                    }
                }
                if (best) next[l][k] = *best;
            }
        }
        if (next == v) break;
        v = std::move(next);
    }
    return v[location];
}

}  // namespace wtg::testing
