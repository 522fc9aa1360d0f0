#pragma once

#include "wtg/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wtg {

enum class Owner { Min, Max, Target };
enum class CmpOp { Lt, Le, Eq, Ge, Gt };

const char* owner_name(Owner o);
const char* op_name(CmpOp op);

struct AtomicConstraint {
    int clock = 0;
    CmpOp op = CmpOp::Le;
    long constant = 0;
    bool operator==(const AtomicConstraint&) const = default;
};

// Conjunction of atomic constraints on one clock, normalized to an interval.
// hi == nullopt means unbounded above.
struct ClockInterval {
    long lo = 0;
    bool lo_strict = false;
    std::optional<long> hi;
    bool hi_strict = false;

    bool empty() const;
    bool contains(const Rational& v) const;
};

struct Guard {
    std::vector<AtomicConstraint> atoms;  // kept in file order for round-trips

    ClockInterval interval(int clock) const;
    bool satisfied(const std::vector<Rational>& valuation) const;
    bool operator==(const Guard&) const = default;
};

struct Location {
    std::string name;
    Owner owner = Owner::Min;
    long rate = 0;
    bool operator==(const Location&) const = default;
};

struct Transition {
    int from = 0;
    int to = 0;
    Guard guard;
    std::vector<int> resets;  // clock indices, in file order
    long weight = 0;
    bool operator==(const Transition&) const = default;
};

struct WeightBounds {
    long w_loc_max = 0;
    long w_trans_max = 0;
    long w_edge_max = 0;
};

struct GameDef {
    std::vector<std::string> clocks;
    long clock_bound = 0;
    std::vector<Location> locations;
    std::vector<Transition> transitions;

    bool operator==(const GameDef&) const = default;

    int location_index(const std::string& name) const;  // -1 if absent
    int clock_count() const { return static_cast<int>(clocks.size()); }
    bool is_target(int loc) const { return locations[loc].owner == Owner::Target; }
    std::vector<int> outgoing(int loc) const;
    WeightBounds weight_bounds() const;
    std::string transition_label(int t) const;  // "l2->l3#1"
};

using Valuation = std::vector<Rational>;

struct Config {
    int location = 0;
    Valuation valuation;

    bool operator==(const Config&) const = default;
    bool operator<(const Config& o) const {
        if (location != o.location) return location < o.location;
        return valuation < o.valuation;
    }
};

// Interval of rationals with optional upper end.
struct DelayInterval {
    Rational lo = 0;
    bool lo_open = false;
    std::optional<Rational> hi;
    bool hi_open = false;
    bool is_empty = false;

    bool contains(const Rational& t) const;
    std::string str() const;
};

struct Edge {
    int transition = 0;
    Rational delay = 0;
    Rational weight = 0;
};

struct Play {
    Config start;
    std::vector<Edge> edges;
    std::size_t size() const { return edges.size(); }
};

struct EdgeResult {
    Config next;
    Rational weight;
};

DelayInterval valid_delay_interval(const GameDef& g, const Config& c, int transition);
EdgeResult apply_edge(const GameDef& g, const Config& c, int transition, const Rational& delay);
Rational cumulated_weight(const Play& p);
Play concat(const Play& a, const Play& b);
Config final_config(const GameDef& g, const Play& p);

std::string valuation_str(const GameDef& g, const Valuation& v);

// ── Game file format ─────────────────────────────────────────────────

GameDef parse_game(const std::string& text);
std::string serialize_game(const GameDef& g);
GameDef load_game_file(const std::string& path);

}  // namespace wtg

namespace wtg {

struct ValidationReport {
    std::size_t region_states = 0;
    std::size_t reachable_states = 0;
    WeightBounds bounds;
};

// Structural checks plus deadlock-freedom on the region game reachable from
// every location at the zero valuation. Throws wtg::Error with a witness.
ValidationReport validate_game(const GameDef& g);

}  // namespace wtg
