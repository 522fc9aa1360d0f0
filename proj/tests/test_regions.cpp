#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

#include <algorithm>
#include <set>

using namespace wtg;
using namespace wtg::testing;

// ── Regions ──────────────────────────────────────────────────────────

TEST_CASE("one clock up to M has 2M+1 regions") {
    for (long M = 0; M <= 5; ++M) CHECK(all_regions(1, M).size() == static_cast<std::size_t>(2 * M + 1));
}

TEST_CASE("two clocks up to 1 give 11 distinct regions") {
    // Four corners, four open sides, the open diagonal and two open triangles.
    std::set<Region> rs;
    for (const auto& r : all_regions(2, 1)) rs.insert(r);
    CHECK(rs.size() == all_regions(2, 1).size());
    CHECK(rs.size() == 11);
}

TEST_CASE("sampled valuations fall back into their region") {
    std::mt19937_64 rng(11);
    for (int clocks = 1; clocks <= 3; ++clocks)
        for (const auto& r : all_regions(clocks, 2)) {
            for (int k = 0; k < 5; ++k) {
                Valuation v = sample_valuation(r, rng);
                CHECK(r.contains(v));
                CHECK(region_of(v) == r);
            }
            CHECK(region_of(representative(r)) == r);
        }
}

TEST_CASE("time successors are ordered and closed under further elapse") {
    std::mt19937_64 rng(3);
    for (const auto& r : all_regions(2, 2)) {
        std::vector<Region> succ = time_successors(r, 2);
        REQUIRE(!succ.empty());
        CHECK(succ.front() == r);
        // A valuation of r delayed by a small amount lands in r or its immediate successor.
        Valuation v = sample_valuation(r, rng);
        Rational d(1, 1000);
        Valuation w = v;
        for (auto& c : w) c += d;
        bool inside = std::all_of(w.begin(), w.end(), [](const Rational& c) { return c <= 2; });
        if (inside) {
            Region rw = region_of(w);
            CHECK(std::find(succ.begin(), succ.end(), rw) != succ.end());
        }
    }
}

TEST_CASE("one-clock region bounds") {
    for (const auto& r : all_regions(1, 3)) {
        Rational lo = region_lo(r), hi = region_hi(r);
        Valuation mid{(lo + hi) / 2};
        CHECK(r.contains(mid));
        CHECK((lo == hi) == r.fracs.empty());
    }
}

// ── Region game ──────────────────────────────────────────────────────

TEST_CASE("every concrete legal move is an edge of the region game") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GameDef g = draw_game(seed);
        RegionGame rg = build_region_game(g);
        std::mt19937_64 rng(seed);
        for (std::size_t s = 0; s < rg.size(); ++s) {
            if (rg.is_target(static_cast<int>(s)) || rg.out[s].empty()) continue;
            Config c{rg.states[s].location, sample_valuation(rg.states[s].region, rng)};
            CHECK(rg.state_of(c) == static_cast<int>(s));
            auto [t, d] = random_legal_move(rg, c, rng);
            EdgeResult r = apply_edge(g, c, t, d);
            int to = rg.state_of(r.next);
            REQUIRE(to >= 0);
            bool found = false;
            for (int e : rg.out[s])
                found = found || (rg.edges[e].transition == t && rg.edges[e].to == to &&
                                  rg.edges[e].guard_region == region_of({c.valuation[0] + d}));
            CHECK(found);
        }
    }
}

TEST_CASE("SCCs partition the states and follow the topological order") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RegionGame rg = build_region_game(draw_game(seed));
        SccInfo scc = scc_decompose(rg);
        std::size_t total = 0;
        for (const auto& m : scc.members) total += m.size();
        CHECK(total == rg.size());
        std::vector<int> pos(scc.members.size());
        for (std::size_t i = 0; i < scc.topo_order.size(); ++i) pos[scc.topo_order[i]] = static_cast<int>(i);
        for (const auto& e : rg.edges)
            if (scc.scc_of[e.from] != scc.scc_of[e.to]) CHECK(pos[scc.scc_of[e.from]] < pos[scc.scc_of[e.to]]);
    }
}

// ── Cycle weights ────────────────────────────────────────────────────

TEST_CASE("cycle weight bounds are attained by their corner witnesses") {
    GameDef g = load_fixture("mixed_signs.json");
    RegionGame rg = build_region_game(g);
    SccInfo scc = scc_decompose(rg);
    std::vector<RegionCycle> cycles = enumerate_simple_cycles(rg, scc);
    REQUIRE(!cycles.empty());
    for (const auto& cyc : cycles) {
        CycleBounds b = cycle_weight_bounds(rg, cyc.states, cyc.transitions);
        CHECK(b.min_weight <= b.max_weight);
        for (const CornerWitness* w : {&b.min_witness, &b.max_witness}) {
            // Replaying the witness from its start gives its weight.
            Config c = w->start;
            Rational total = 0;
            bool legal = true;
            for (const auto& [t, d] : w->steps) {
                if (!valid_delay_interval(g, c, t).contains(d)) {
                    legal = false;
                    break;
                }
                EdgeResult r = apply_edge(g, c, t, d);
                total += r.weight;
                c = r.next;
            }
            // Corner witnesses may sit on the closure of a strict guard; only check legal ones.
            if (legal) CHECK(total == w->weight);
        }
        CHECK(b.min_witness.weight == Rational(b.min_weight));
        CHECK(b.max_witness.weight == Rational(b.max_weight));
    }
}

TEST_CASE("the l5 loop of mixed_signs weighs between -5 and -1") {
    GameDef g = load_fixture("mixed_signs.json");
    RegionGame rg = build_region_game(g);
    SccInfo scc = scc_decompose(rg);
    int l5 = g.location_index("l5");
    bool seen = false;
    for (const auto& cyc : enumerate_simple_cycles(rg, scc)) {
        if (rg.states[cyc.states[0]].location != l5) continue;
        seen = true;
        CHECK(cyc.min_weight == -5);
        CHECK(cyc.max_weight == -1);
    }
    CHECK(seen);
}
