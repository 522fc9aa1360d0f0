#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

#include "wtg/error.hpp"

using namespace wtg;
using namespace wtg::testing;

namespace {

int state_at(const RegionGame& rg, const std::string& location, const Rational& x) {
    return rg.state_of(Config{rg.game.location_index(location), {x}});
}

// Random draws whose cycle enumeration stays under the cap, with their analysis.
struct Analyzed {
    RegionGame rg;
    SccInfo scc;
    DivergenceReport div;
};

std::vector<Analyzed> analyzed_draws(std::uint64_t seeds) {
    std::vector<Analyzed> out;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        RegionGame rg = build_region_game(draw_game(seed));
        SccInfo scc = scc_decompose(rg);
        try {
            DivergenceReport div = check_divergence(rg, scc);
            out.push_back({std::move(rg), std::move(scc), std::move(div)});
        } catch (const Error& e) {
            REQUIRE(e.kind() == "cycle_overflow");
        }
    }
    return out;
}

}  // namespace

// ── Divergence ───────────────────────────────────────────────────────

TEST_CASE("mixed_signs is divergent with one positive and one negative loop") {
    RegionGame rg = build_region_game(load_fixture("mixed_signs.json"));
    SccInfo scc = scc_decompose(rg);
    DivergenceReport div = check_divergence(rg, scc);
    CHECK(div.divergent);
    CHECK(!div.witness.has_value());
    const int l1 = state_at(rg, "l1", 0), l5 = state_at(rg, "l5", 0);
    CHECK(div.signs[scc.scc_of[l1]].sign == Sign::Positive);
    CHECK(div.signs[scc.scc_of[l5]].sign == Sign::Negative);
    CHECK(div.signs[scc.scc_of[state_at(rg, "l2", 0)]].sign == Sign::Trivial);
    for (const SccSign& s : div.signs) CHECK(s.sign != Sign::Mixed);
}

TEST_CASE("raising the l5 loop weight breaks divergence with a witness cycle") {
    RegionGame rg = build_region_game(mixed_signs_loop_weight3());
    DivergenceReport div = check_divergence(rg);
    CHECK(!div.divergent);
    REQUIRE(div.witness.has_value());
    // The loop weighs 3 - 2d for d in (1, 3]: the closure spans [-3, 1].
    CHECK(div.witness->min_weight == -3);
    CHECK(div.witness->max_weight == 1);
    CHECK(rg.states[div.witness->states[0]].location == rg.game.location_index("l5"));
}

TEST_CASE("divergence means every SCC has a uniform cycle sign") {
    std::vector<Analyzed> draws = analyzed_draws(60);
    CHECK(draws.size() >= 40);
    for (const auto& [rg, scc, div] : draws) {
        bool uniform = true;
        for (const RegionCycle& c : div.cycles) {
            const SccSign& s = div.signs[c.scc];
            if (s.sign == Sign::Positive) CHECK(c.min_weight >= 1);
            if (s.sign == Sign::Negative) CHECK(c.max_weight <= -1);
            if (s.sign == Sign::Mixed) uniform = false;
        }
        CHECK(div.divergent == uniform);
        CHECK(div.witness.has_value() == !div.divergent);
    }
}

// ── Classification ───────────────────────────────────────────────────

TEST_CASE("mixed_signs classes at clock zero") {
    RegionGame rg = build_region_game(load_fixture("mixed_signs.json"));
    ValueClassification cls = classify_values(rg);
    CHECK(cls.cls[state_at(rg, "l1", 0)] == ValueClass::PlusInfinity);
    CHECK(cls.cls[state_at(rg, "l5", 0)] == ValueClass::MinusInfinity);
    CHECK(cls.cls[state_at(rg, "l2", 0)] == ValueClass::Finite);
    CHECK(cls.cls[state_at(rg, "l4", 0)] == ValueClass::Finite);
    CHECK(cls.cls[state_at(rg, "l3", 0)] == ValueClass::Finite);
    CHECK(cls.buchi_edge[state_at(rg, "l5", 0)] >= 0);
    CHECK(cls.trap_edge[state_at(rg, "l1", 0)] >= 0);
}

TEST_CASE("attractor ranks decrease along the attracting moves") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        RegionGame rg = build_region_game(draw_game(seed));
        std::vector<bool> goal(rg.size()), all(rg.size(), true);
        for (std::size_t s = 0; s < rg.size(); ++s) goal[s] = rg.is_target(static_cast<int>(s));
        std::vector<int> rank = min_attractor(rg, goal, all);
        for (std::size_t s = 0; s < rg.size(); ++s) {
            if (goal[s]) {
                CHECK(rank[s] == 0);
                continue;
            }
            if (rank[s] <= 0 || rg.out[s].empty()) continue;
            bool some = false, every = true;
            for (int e : rg.out[s]) {
                int r = rank[rg.edges[e].to];
                bool lower = r >= 0 && r < rank[s];
                some = some || lower;
                every = every && lower;
            }
            if (rg.owner(static_cast<int>(s)) == Owner::Min) CHECK(some);
            else CHECK(every);
        }
    }
}

TEST_CASE("+inf states are exactly those Min cannot drive to a target") {
    for (const auto& [rg, scc, div] : analyzed_draws(60)) {
        if (!div.divergent) continue;
        ValueClassification cls = classify_values(rg, scc, div);
        for (std::size_t s = 0; s < rg.size(); ++s)
            CHECK((cls.cls[s] == ValueClass::PlusInfinity) == (cls.target_rank[s] < 0));
    }
}

TEST_CASE("pruning keeps exactly the finite states and closes their moves") {
    for (const auto& [rg, scc, div] : analyzed_draws(40)) {
        if (!div.divergent) continue;
        ValueClassification cls = classify_values(rg, scc, div);
        RegionGame pruned = prune_game(rg, cls);
        CHECK(pruned.size() == cls.count(ValueClass::Finite));
        for (std::size_t s = 0; s < pruned.size(); ++s) {
            int full = rg.find(pruned.states[s].location, pruned.states[s].region);
            REQUIRE(full >= 0);
            CHECK(cls.cls[full] == ValueClass::Finite);
        }
    }
}
