#include "support/random_games.hpp"

#include "wtg/error.hpp"

#include <random>

namespace wtg::testing {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Guard random_guard(std::mt19937_64& rng, long M) {
    Guard g;
    switch (uniform(rng, 0, 3)) {
        case 0:  // always
            g.atoms.push_back({0, CmpOp::Le, M});
            break;
        case 1: {  // upper bound
            g.atoms.push_back({0, uniform(rng, 0, 1) ? CmpOp::Le : CmpOp::Lt, uniform(rng, 1, M)});
            break;
        }
        case 2: {  // lower bound
            g.atoms.push_back({0, uniform(rng, 0, 1) ? CmpOp::Ge : CmpOp::Gt, uniform(rng, 0, M - 1)});
            g.atoms.push_back({0, CmpOp::Le, M});
            break;
        }
        default: {  // window
            long a = uniform(rng, 0, M - 1), b = uniform(rng, a + 1, M);
            g.atoms.push_back({0, CmpOp::Ge, a});
            g.atoms.push_back({0, CmpOp::Le, b});
        }
    }
    return g;
}

}  // namespace

GameDef draw_game(std::uint64_t seed, const RandomGameShape& shape) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
    GameDef g;
    g.clocks = {"x"};
    g.clock_bound = uniform(rng, 1, shape.max_clock_bound);
    const long M = g.clock_bound, W = shape.max_weight;
    const int n = static_cast<int>(uniform(rng, 3, shape.max_locations));
    const bool signed_classes = uniform(rng, 0, 1) == 0;

    std::vector<int> sign(n, 1);
    for (int l = 0; l + 1 < n; ++l) {
        Location loc;
        loc.name = "l" + std::to_string(l);
        loc.owner = uniform(rng, 0, 1) ? Owner::Min : Owner::Max;
        sign[l] = uniform(rng, 0, 1) ? 1 : -1;
        loc.rate = signed_classes ? sign[l] * uniform(rng, 0, W) : uniform(rng, -W, W);
        g.locations.push_back(loc);
    }
    g.locations.push_back({"goal", Owner::Target, 0});
    const int goal = n - 1;

    auto weight_for = [&](int from, int to) {
        if (!signed_classes || to == goal) return uniform(rng, -W, W);
        if (sign[from] == sign[to]) return sign[from] * uniform(rng, 1, W);
        return uniform(rng, -W, W);
    };
    // Between sign classes, edges only go forward, so every cycle stays in one class.
    auto allowed = [&](int from, int to) { return !signed_classes || to == goal || sign[from] == sign[to] || from < to; };

    for (int l = 0; l < goal; ++l) {
        int to = static_cast<int>(uniform(rng, 0, n - 1));
        if (!allowed(l, to)) to = goal;
        Transition t{l, to, {{{0, CmpOp::Le, M}}}, {}, weight_for(l, to)};
        if (uniform(rng, 0, 1)) t.resets.push_back(0);
        g.transitions.push_back(t);
    }
    const int extra = static_cast<int>(uniform(rng, n - 1, 2 * n));
    for (int k = 0; k < extra; ++k) {
        int from = static_cast<int>(uniform(rng, 0, goal - 1));
        int to = static_cast<int>(uniform(rng, 0, n - 1));
        if (!allowed(from, to)) continue;
        Transition t{from, to, random_guard(rng, M), {}, weight_for(from, to)};
        if (uniform(rng, 0, 2) == 0) t.resets.push_back(0);
        g.transitions.push_back(t);
    }
    return g;
}

std::optional<RandomDivergentGame> divergent_game(std::uint64_t seed, const RandomGameShape& shape) {
    RandomDivergentGame out;
    out.seed = seed;
    out.game = draw_game(seed, shape);
    try {
        out.solution = solve_game(out.game);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!out.solution.divergence.divergent) return std::nullopt;
    for (int l = 0; l < static_cast<int>(out.game.locations.size()); ++l) {
        if (out.game.is_target(l)) continue;
        int cell = out.solution.cells.cell_of(0);
        if (out.solution.pruned_state(l, cell) >= 0) {
            out.start = Config{l, {Rational(0)}};
            return out;
        }
    }
    return std::nullopt;
}

std::vector<RandomDivergentGame> divergent_games(std::size_t count, const RandomGameShape& shape) {
    std::vector<RandomDivergentGame> out;
    for (std::uint64_t seed = 1; out.size() < count; ++seed)
        if (auto g = divergent_game(seed, shape)) out.push_back(std::move(*g));
    return out;
}

}  // namespace wtg::testing
