#pragma once

#include "wtg/model.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wtg {

// ── Regions ──────────────────────────────────────────────────────────

// A clock region inside [0,M]^C. Clocks listed in `fracs` have a non-zero
// fractional part; the classes are ordered by increasing fractional part and
// clocks in one class share it. Every other clock sits on an integer.
struct Region {
    std::vector<long> ints;
    std::vector<std::vector<int>> fracs;

    bool is_point(int clock) const;
    bool contains(const Valuation& v) const;
    std::string str(const std::vector<std::string>& clock_names) const;

    bool operator==(const Region&) const = default;
    auto operator<=>(const Region&) const = default;
};

Region region_of(const Valuation& v);
std::vector<Region> all_regions(int clocks, long M);
// r itself followed by its strict time successors that stay inside [0,M]^C.
std::vector<Region> time_successors(const Region& r, long M);
Region reset_region(const Region& r, const std::vector<int>& resets);
bool region_satisfies(const Region& r, const Guard& g);
Valuation representative(const Region& r);
Valuation sample_valuation(const Region& r, std::mt19937_64& rng);
// Integer vertices of the closure of r.
std::vector<std::vector<long>> region_corners(const Region& r);
// One-clock helpers: the region's closure [lo, hi] (lo == hi for points).
Rational region_lo(const Region& r);
Rational region_hi(const Region& r);
bool region_before(const Region& a, const Region& b);  // one clock: every point of a < every point of b

// ── Region game ──────────────────────────────────────────────────────

struct RegionState {
    int location = 0;
    Region region;
};

struct RegionEdge {
    int from = 0;
    int transition = 0;
    Region guard_region;
    int to = 0;
};

struct RegionGameOptions {
    bool reachable_only = false;  // keep only states reachable from (l, 0) for some l
};

struct RegionGame {
    GameDef game;
    std::vector<RegionState> states;
    std::vector<RegionEdge> edges;
    std::vector<std::vector<int>> out;  // edge indices per state
    std::vector<std::vector<int>> in;
    std::map<std::pair<int, Region>, int> index;

    int find(int location, const Region& r) const;  // -1 if absent
    int state_of(const Config& c) const;            // -1 if absent
    std::size_t size() const { return states.size(); }
    Owner owner(int s) const { return game.locations[states[s].location].owner; }
    bool is_target(int s) const { return owner(s) == Owner::Target; }
    std::string state_name(int s) const;
    std::vector<int> successors(int s) const;  // distinct successor states, sorted
    // Rebuild adjacency and index after editing states/edges.
    void reindex();
};

RegionGame build_region_game(const GameDef& g, const RegionGameOptions& opt = {});
// States reachable from the given sources (all states of rg by index).
std::vector<bool> reachable_from(const RegionGame& rg, const std::vector<int>& sources);
std::vector<int> zero_states(const RegionGame& rg);

// ── SCCs ─────────────────────────────────────────────────────────────

struct SccInfo {
    std::vector<int> scc_of;                // per state
    std::vector<std::vector<int>> members;  // per SCC, sorted state indices
    std::vector<int> topo_order;            // SCC ids, sources first
    std::vector<bool> has_cycle;            // per SCC
};

SccInfo scc_decompose(const RegionGame& rg);

// ── Corner points and cycles ─────────────────────────────────────────

struct CornerNode {
    int state = 0;
    std::vector<long> corner;
    auto operator<=>(const CornerNode&) const = default;
};

struct CornerEdge {
    int from = 0;  // node indices
    int to = 0;
    int region_edge = 0;
    long delay = 0;
    long weight = 0;
};

struct CornerGraph {
    std::vector<CornerNode> nodes;
    std::vector<CornerEdge> edges;
};

CornerGraph build_corner_graph(const RegionGame& rg);

// A cycle of region states s_0 .. s_{k-1}; step i takes transition
// transitions[i] from s_i to s_{(i+1) mod k} through any guard region that
// the region game allows for that move.
struct RegionCycle {
    std::vector<int> states;
    std::vector<int> transitions;
    long min_weight = 0;
    long max_weight = 0;
    int scc = -1;
};

struct CornerWitness {
    Config start;
    std::vector<std::pair<int, Rational>> steps;  // (transition, delay)
    Rational weight;
};

struct CycleBounds {
    long min_weight = 0;
    long max_weight = 0;
    CornerWitness min_witness;
    CornerWitness max_witness;
};

CycleBounds cycle_weight_bounds(const RegionGame& rg, const std::vector<int>& states,
                                const std::vector<int>& transitions);

constexpr std::size_t kDefaultCycleCap = 100000;

std::vector<RegionCycle> enumerate_simple_cycles(const RegionGame& rg, const SccInfo& scc,
                                                 std::size_t cap = kDefaultCycleCap);

}  // namespace wtg
