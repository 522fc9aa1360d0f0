#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

using namespace wtg;
using namespace wtg::testing;

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

void check_on_grid(const PAFunction& f, long hi, const std::function<Rational(const Rational&)>& expected) {
    for (long k = 0; k <= 8 * hi; ++k) {
        Rational x = q(k, 8);
        CHECK(f.eval(x) == ExtRational(expected(x)));
    }
}

const std::vector<RandomDivergentGame>& pool() {
    static const std::vector<RandomDivergentGame> games = divergent_games(20);
    return games;
}

}  // namespace

// ── Hand-derived values ──────────────────────────────────────────────

TEST_CASE("mixed_signs: l4 climbs from 1 to 3 and stays there") {
    Solution sol = solve_game(load_fixture("mixed_signs.json"));
    CHECK(sol.iteration.converged);
    check_on_grid(sol.value.loc[sol.game.location_index("l4")], 3,
                  [](const Rational& x) { return x <= 2 ? x + 1 : Rational(3); });
}

TEST_CASE("neg_escape: Max leaves after one loop, value -1 everywhere") {
    Solution sol = solve_game(load_fixture("neg_escape.json"));
    check_on_grid(sol.value.loc[sol.game.location_index("a")], 1, [](const Rational&) { return Rational(-1); });
    check_on_grid(sol.value.loc[sol.game.location_index("b")], 1, [](const Rational&) { return Rational(0); });
}

TEST_CASE("neg_timed: Min waits to 2 at rate -1, so a is worth x - 3") {
    Solution sol = solve_game(load_fixture("neg_timed.json"));
    check_on_grid(sol.value.loc[sol.game.location_index("a")], 2, [](const Rational& x) { return x - 3; });
}

// ── Fixpoint properties ──────────────────────────────────────────────

TEST_CASE("the solved value is a fixpoint of the one-step operator") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        REQUIRE(sol.iteration.converged);
        PAValue next = apply_F(sol.pruned, sol.value);
        for (std::size_t l = 0; l < sol.value.loc.size(); ++l)
            CHECK(sup_distance(next.loc[l], sol.value.loc[l]) == ExtRational(0));
    }
}

TEST_CASE("Min locations sit below every transition cost, Max locations above") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        for (std::size_t t = 0; t < sol.game.transitions.size(); ++t) {
            int from = sol.game.transitions[t].from;
            PAFunction cost = transition_cost(sol.pruned, sol.value, static_cast<int>(t));
            const PAFunction& v = sol.value.loc[from];
            if (sol.game.locations[from].owner == Owner::Min) CHECK(pa_leq(v, cost));
            if (sol.game.locations[from].owner == Owner::Max) CHECK(pa_leq(cost, v));
        }
    }
}

TEST_CASE("iterates decrease from the initial value") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        PAValue v = initial_value(sol.full, sol.classes);
        for (int i = 0; i < 4; ++i) {
            PAValue w = apply_F(sol.pruned, v);
            for (std::size_t l = 0; l < v.loc.size(); ++l) CHECK(pa_leq(w.loc[l], v.loc[l]));
            v = std::move(w);
        }
        for (std::size_t l = 0; l < v.loc.size(); ++l) CHECK(pa_leq(sol.value.loc[l], v.loc[l]));
    }
}

TEST_CASE("classified infinite states keep their infinite value") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        for (std::size_t s = 0; s < sol.full.size(); ++s) {
            const RegionState& st = sol.full.states[s];
            Rational x = representative(st.region)[0];
            ExtRational v = sol.value.at(st.location, x);
            switch (sol.classes.cls[s]) {
                case ValueClass::PlusInfinity: CHECK(v.is_pos_inf()); break;
                case ValueClass::MinusInfinity: CHECK(v.is_neg_inf()); break;
                case ValueClass::Finite: CHECK(v.finite()); break;
            }
        }
    }
}

// ── Cells ────────────────────────────────────────────────────────────

TEST_CASE("cells alternate points and open intervals and carry affine values") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        const CellDecomposition& cd = sol.cells;
        REQUIRE(cd.cells.size() == 2 * cd.knots.size() - 1);
        for (std::size_t i = 0; i < cd.cells.size(); ++i) {
            CHECK(cd.cells[i].point() == (i % 2 == 0));
            CHECK(cd.cell_of(cd.cells[i].midpoint()) == static_cast<int>(i));
        }
        for (std::size_t l = 0; l < sol.game.locations.size(); ++l)
            for (std::size_t c = 1; c < cd.cells.size(); c += 2) {
                const Cell& cell = cd.cells[c];
                ExtRational a = sol.value.at(static_cast<int>(l), (cell.lo * 3 + cell.hi) / 4);
                ExtRational m = sol.value.at(static_cast<int>(l), cell.midpoint());
                ExtRational b = sol.value.at(static_cast<int>(l), (cell.lo + cell.hi * 3) / 4);
                if (a.finite() && m.finite() && b.finite()) CHECK(a.value + b.value == 2 * m.value);
                else CHECK((a == m && m == b));
            }
    }
}
