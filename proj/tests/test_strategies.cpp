#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

#include "wtg/error.hpp"

using namespace wtg;
using namespace wtg::testing;

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

const std::vector<RandomDivergentGame>& pool() {
    static const std::vector<RandomDivergentGame> games = divergent_games(20);
    return games;
}

const Rational kEps = q(1, 10);
const BigInt kN = 100;

}  // namespace

// ── Delay rules ──────────────────────────────────────────────────────

TEST_CASE("delay rules") {
    CHECK(DelayRule::immediate().delay_from(q(3, 2)) == 0);
    CHECK(DelayRule::to_point(q(2)).delay_from(q(1, 2)) == q(3, 2));
    DelayRule r = DelayRule::interior(q(2), q(1, 4));
    CHECK(r.delay_from(q(1)) == q(3, 4));          // slack wins: fire at 7/4
    CHECK(r.delay_from(q(19, 10)) == q(1, 20));   // half the gap wins: fire at 39/20
    CHECK(r.delay_from(q(19, 10)) > 0);
}

// ── Constants ────────────────────────────────────────────────────────

TEST_CASE("K follows its closed form") {
    WeightBounds b;
    b.w_edge_max = 3;
    // (3*10*(4*5+2) + 100) * (10*(4*5+1) + 1) = 760 * 211
    CHECK(compute_K(b, 10, 4, 5, 100) == 160360);
    CHECK(compute_K(b, 1, 1, 1, 0) == (3 * 3) * (2 + 1));
}

TEST_CASE("the probability threshold lies in (0, 1) and grows with K") {
    WeightBounds b;
    b.w_loc_max = 2;
    b.w_trans_max = 3;
    b.w_edge_max = 5;
    PThreshold small = compute_p_threshold(q(-1), kEps, 4, b);
    PThreshold large = compute_p_threshold(q(-1), kEps, 40, b);
    CHECK(small.p_tilde > 0);
    CHECK(small.p_tilde < 1);
    CHECK(large.p_tilde < 1);
    CHECK(small.p_tilde < large.p_tilde);
    CHECK(!small.components.empty());
    CHECK_THROWS_AS(compute_p_threshold(q(-1), q(0), 4, b), Error);
}

// ── Synthesis ────────────────────────────────────────────────────────

TEST_CASE("synthesized strategies are valid on every clock value of their cells") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        std::string why;
        SwitchingStrategy sw = synth_switching(sol, kEps, kN);
        CHECK_MESSAGE(strategy_valid_on_cells(sol, sw.sigma1, &why), why);
        CHECK_MESSAGE(strategy_valid_on_cells(sol, sw.sigma2, &why), why);
        CHECK_MESSAGE(strategy_valid_on_cells(sol, synth_max_memoryless(sol, kEps), &why), why);
        std::mt19937_64 rng(rd.seed);
        for (Owner o : {Owner::Min, Owner::Max}) {
            MemorylessDetStrategy r = random_memoryless(sol, o, kEps, rng);
            CHECK_MESSAGE(strategy_valid_on_cells(sol, r, &why), why);
        }
    }
}

TEST_CASE("sigma1 moves reach the value within eps/K on their cell") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        SwitchingStrategy sw = synth_switching(sol, kEps, kN);
        Rational step = kEps / Rational(sw.K);
        for (std::size_t l = 0; l < sol.game.locations.size(); ++l)
            for (std::size_t c = 0; c < sol.cells.cells.size(); ++c) {
                auto a = sw.sigma1.at(static_cast<int>(l), static_cast<int>(c));
                if (!a) continue;
                const Cell& cell = sol.cells.cells[c];
                Rational x = cell.midpoint();
                Config cfg{static_cast<int>(l), {x}};
                Rational d = a->rule.delay_from(x);
                EdgeResult r = apply_edge(sol.game, cfg, a->transition, d);
                ExtRational after = sol.value.at(r.next.location, r.next.valuation[0]);
                ExtRational here = sol.value.at(static_cast<int>(l), x);
                REQUIRE(after.finite());
                REQUIRE(here.finite());
                CHECK(r.weight + after.value <= here.value + step);
            }
    }
}

TEST_CASE("the superposition mixes sigma1 and sigma2 with weights p and 1-p") {
    Solution sol = solve_game(load_fixture("neg_escape.json"));
    SwitchingStrategy sw = synth_switching(sol, kEps, kN);
    const Rational p = q(3, 4);
    StochasticStrategy eta = build_eta_p(sw, sol, p);
    for (std::size_t l = 0; l < eta.table.size(); ++l)
        for (std::size_t c = 0; c < eta.table[l].size(); ++c) {
            const auto& m = eta.table[l][c];
            if (!m) continue;
            CHECK(m->total() == 1);
            Rational alt = 0;
            for (const auto& a : m->atoms)
                if (a.alt) alt += a.prob;
            CHECK((alt == 0 || alt == 1 - p));
        }
    CHECK_THROWS_AS(build_eta_p(sw, sol, q(0)), Error);
    CHECK_THROWS_AS(build_eta_p(sw, sol, q(1)), Error);
}

TEST_CASE("empirical K stays below the closed form on the fixtures") {
    for (const char* f : {"mixed_signs.json", "neg_escape.json", "neg_timed.json"}) {
        Solution sol = solve_game(load_fixture(f));
        SwitchingStrategy sw = synth_switching(sol, kEps, kN);
        std::size_t k = empirical_K(sol, sw.sigma1, 500, 100, 7);
        CHECK(k >= 1);
        CHECK(BigInt(static_cast<unsigned long>(k)) <= sw.K);
        CHECK(empirical_K(sol, sw.sigma1, 500, 100, 7) == k);
    }
}

// ── Random moves ─────────────────────────────────────────────────────

TEST_CASE("random legal moves are allowed and apply cleanly") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        std::mt19937_64 rng(rd.seed * 7);
        Config c = rd.start;
        for (int step = 0; step < 30 && !sol.game.is_target(c.location); ++step) {
            auto [t, d] = random_legal_move(sol.full, c, rng);
            CHECK(move_allowed(sol.full, c, t, d));
            c = apply_edge(sol.game, c, t, d).next;
        }
    }
}

// ── Strategy files ───────────────────────────────────────────────────

TEST_CASE("strategy files round-trip") {
    for (const auto& rd : pool()) {
        const Solution& sol = rd.solution;
        SwitchingStrategy sw = synth_switching(sol, kEps, kN);
        LoadedStrategy ls = strategy_from_json(sol.game, strategy_to_json(sol.game, sw));
        REQUIRE(ls.kind == "switching");
        CHECK(ls.switching->K == sw.K);
        CHECK(ls.switching->sigma1.table == sw.sigma1.table);
        CHECK(ls.switching->sigma2.table == sw.sigma2.table);

        LoadedStrategy ld = strategy_from_json(sol.game, strategy_to_json(sol.game, sw.sigma1));
        REQUIRE(ld.kind == "deterministic");
        CHECK(ld.deterministic->table == sw.sigma1.table);
        CHECK(ld.deterministic->cells.knots == sol.cells.knots);

        StochasticStrategy eta = build_eta_p(sw, sol, q(9, 10));
        LoadedStrategy lt = strategy_from_json(sol.game, strategy_to_json(sol.game, eta));
        REQUIRE(lt.kind == "stochastic");
        CHECK(lt.stochastic->table == eta.table);
    }
}

TEST_CASE("malformed strategy files are rejected") {
    Solution sol = solve_game(load_fixture("neg_escape.json"));
    CHECK_THROWS_AS(strategy_from_json(sol.game, "{"), Error);
    CHECK_THROWS_AS(strategy_from_json(sol.game, R"({"kind":"nonsense"})"), Error);
}
