#include "wtg/model.hpp"
#include "wtg/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace wtg {

using json = nlohmann::ordered_json;

const char* owner_name(Owner o) {
    switch (o) {
        case Owner::Min: return "min";
        case Owner::Max: return "max";
        default: return "target";
    }
}

const char* op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "lt";
        case CmpOp::Le: return "le";
        case CmpOp::Eq: return "eq";
        case CmpOp::Ge: return "ge";
        default: return "gt";
    }
}

// ── Guards ───────────────────────────────────────────────────────────

bool ClockInterval::empty() const {
    if (!hi) return false;
    if (*hi < lo) return true;
    return *hi == lo && (lo_strict || hi_strict);
}

bool ClockInterval::contains(const Rational& v) const {
    if (lo_strict ? !(v > lo) : !(v >= lo)) return false;
    if (hi) {
        if (hi_strict ? !(v < *hi) : !(v <= *hi)) return false;
    }
    return true;
}

ClockInterval Guard::interval(int clock) const {
    ClockInterval iv;
    auto tighten_lo = [&](long c, bool strict) {
        if (c > iv.lo || (c == iv.lo && strict)) { iv.lo = c; iv.lo_strict = strict; }
    };
    auto tighten_hi = [&](long c, bool strict) {
        if (!iv.hi || c < *iv.hi || (c == *iv.hi && strict)) { iv.hi = c; iv.hi_strict = strict; }
    };
    for (const auto& a : atoms) {
        if (a.clock != clock) continue;
        switch (a.op) {
            case CmpOp::Lt: tighten_hi(a.constant, true); break;
            case CmpOp::Le: tighten_hi(a.constant, false); break;
            case CmpOp::Eq: tighten_lo(a.constant, false); tighten_hi(a.constant, false); break;
            case CmpOp::Ge: tighten_lo(a.constant, false); break;
            case CmpOp::Gt: tighten_lo(a.constant, true); break;
        }
    }
    return iv;
}

bool Guard::satisfied(const Valuation& v) const {
    for (const auto& a : atoms) {
        const Rational& x = v[a.clock];
        bool ok = false;
        switch (a.op) {
            case CmpOp::Lt: ok = x < a.constant; break;
            case CmpOp::Le: ok = x <= a.constant; break;
            case CmpOp::Eq: ok = x == a.constant; break;
            case CmpOp::Ge: ok = x >= a.constant; break;
            case CmpOp::Gt: ok = x > a.constant; break;
        }
        if (!ok) return false;
    }
    return true;
}

// ── GameDef helpers ──────────────────────────────────────────────────

int GameDef::location_index(const std::string& name) const {
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return static_cast<int>(i);
    return -1;
}

std::vector<int> GameDef::outgoing(int loc) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].from == loc) out.push_back(static_cast<int>(i));
    return out;
}

WeightBounds GameDef::weight_bounds() const {
    WeightBounds b;
    for (const auto& l : locations) b.w_loc_max = std::max(b.w_loc_max, std::labs(l.rate));
    for (const auto& t : transitions) b.w_trans_max = std::max(b.w_trans_max, std::labs(t.weight));
    b.w_edge_max = clock_bound * b.w_loc_max + b.w_trans_max;
    return b;
}

std::string GameDef::transition_label(int t) const {
    const auto& tr = transitions[t];
    return locations[tr.from].name + "->" + locations[tr.to].name + "#" + std::to_string(t);
}

std::string valuation_str(const GameDef& g, const Valuation& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += g.clocks[i] + "=" + to_pq(v[i]);
    }
    return s;
}

// ── Semantics ────────────────────────────────────────────────────────

bool DelayInterval::contains(const Rational& t) const {
    if (is_empty) return false;
    if (lo_open ? !(t > lo) : !(t >= lo)) return false;
    if (hi && (hi_open ? !(t < *hi) : !(t <= *hi))) return false;
    return true;
}

std::string DelayInterval::str() const {
    if (is_empty) return "empty";
    std::string s = lo_open ? "(" : "[";
    s += to_pq(lo) + ",";
    s += hi ? to_pq(*hi) : std::string("+inf");
    s += (hi && !hi_open) ? "]" : ")";
    return s;
}

DelayInterval valid_delay_interval(const GameDef& g, const Config& c, int transition) {
    const auto& tr = g.transitions.at(transition);
    DelayInterval d;
    for (int x = 0; x < g.clock_count(); ++x) {
        ClockInterval iv = tr.guard.interval(x);
        const Rational& v = c.valuation[x];
        Rational lo = Rational(iv.lo) - v;
        if (lo > d.lo || (lo == d.lo && iv.lo_strict)) { d.lo = lo; d.lo_open = iv.lo_strict; }
        if (iv.hi) {
            Rational hi = Rational(*iv.hi) - v;
            if (!d.hi || hi < *d.hi || (hi == *d.hi && iv.hi_strict)) { d.hi = hi; d.hi_open = iv.hi_strict; }
        }
    }
    if (d.lo < 0) { d.lo = 0; d.lo_open = false; }
    if (d.hi && (*d.hi < d.lo || (*d.hi == d.lo && (d.lo_open || d.hi_open)))) d.is_empty = true;
    return d;
}

EdgeResult apply_edge(const GameDef& g, const Config& c, int transition, const Rational& delay) {
    if (transition < 0 || transition >= static_cast<int>(g.transitions.size()))
        throw Error("model", "unknown_transition", std::to_string(transition));
    const auto& tr = g.transitions[transition];
    if (tr.from != c.location)
        throw Error("model", "wrong_location", g.transition_label(transition) + " does not leave " +
                                                   g.locations[c.location].name);
    if (delay < 0) throw Error("model", "invalid_delay", "negative delay " + to_pq(delay));
    Valuation moved = c.valuation;
    for (auto& v : moved) v += delay;
    if (!tr.guard.satisfied(moved))
        throw Error("model", "invalid_delay",
                    "delay " + to_pq(delay) + " violates the guard of " + g.transition_label(transition));
    for (int r : tr.resets) moved[r] = 0;
    EdgeResult res;
    res.next = Config{tr.to, std::move(moved)};
    res.weight = delay * g.locations[c.location].rate + tr.weight;
    return res;
}

Rational cumulated_weight(const Play& p) {
    Rational w = 0;
    for (const auto& e : p.edges) w += e.weight;
    return w;
}

Play concat(const Play& a, const Play& b) {
    Play p = a;
    p.edges.insert(p.edges.end(), b.edges.begin(), b.edges.end());
    return p;
}

Config final_config(const GameDef& g, const Play& p) {
    Config c = p.start;
    for (const auto& e : p.edges) c = apply_edge(g, c, e.transition, e.delay).next;
    return c;
}

// ── Game file format ─────────────────────────────────────────────────

namespace {

Error perr(const std::string& kind, const std::string& detail) { return Error("parse", kind, detail); }

long read_int(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw perr("non_integer", what + " must be an integer");
    return j.get<long>();
}

const json& field(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw perr("missing_field", ctx + " lacks \"" + key + "\"");
    return *it;
}

CmpOp read_op(const std::string& s) {
    if (s == "lt") return CmpOp::Lt;
    if (s == "le") return CmpOp::Le;
    if (s == "eq") return CmpOp::Eq;
    if (s == "ge") return CmpOp::Ge;
    if (s == "gt") return CmpOp::Gt;
    throw perr("bad_operator", "unknown comparison '" + s + "'");
}

}  // namespace

GameDef parse_game(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw perr("syntax", "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw perr("syntax", "top level must be an object");

    GameDef g;
    const json& clocks = field(doc, "clocks", "game");
    if (!clocks.is_array()) throw perr("syntax", "clocks must be an array");
    std::set<std::string> seen;
    for (const auto& c : clocks) {
        if (!c.is_string()) throw perr("syntax", "clock names must be strings");
        auto name = c.get<std::string>();
        if (!seen.insert(name).second) throw perr("duplicate_name", "clock " + name);
        g.clocks.push_back(name);
    }
    g.clock_bound = read_int(field(doc, "clock_bound", "game"), "clock_bound");
    if (g.clock_bound < 0) throw perr("negative_constant", "clock_bound");

    const json& locs = field(doc, "locations", "game");
    if (!locs.is_array()) throw perr("syntax", "locations must be an array");
    seen.clear();
    for (const auto& l : locs) {
        Location loc;
        loc.name = field(l, "name", "location").get<std::string>();
        if (!seen.insert(loc.name).second) throw perr("duplicate_name", "location " + loc.name);
        bool target = l.contains("target") && l["target"].get<bool>();
        std::string owner = l.contains("owner") ? l["owner"].get<std::string>() : (target ? "target" : "");
        if (owner == "target") target = true;
        else if (owner == "min") loc.owner = Owner::Min;
        else if (owner == "max") loc.owner = Owner::Max;
        else throw perr("bad_owner", "location " + loc.name + " has owner '" + owner + "'");
        if (target) loc.owner = Owner::Target;
        loc.rate = l.contains("rate") ? read_int(l["rate"], "rate of " + loc.name) : 0;
        g.locations.push_back(loc);
    }

    auto clock_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < g.clocks.size(); ++i)
            if (g.clocks[i] == name) return static_cast<int>(i);
        throw perr("unknown_clock", name);
    };
    auto loc_index = [&](const std::string& name) {
        int i = g.location_index(name);
        if (i < 0) throw perr("unknown_location", name);
        return i;
    };

    const json& trs = field(doc, "transitions", "game");
    if (!trs.is_array()) throw perr("syntax", "transitions must be an array");
    for (const auto& t : trs) {
        Transition tr;
        tr.from = loc_index(field(t, "from", "transition").get<std::string>());
        tr.to = loc_index(field(t, "to", "transition").get<std::string>());
        if (t.contains("guard")) {
            for (const auto& a : t["guard"]) {
                AtomicConstraint ac;
                ac.clock = clock_index(field(a, "clock", "constraint").get<std::string>());
                ac.op = read_op(field(a, "op", "constraint").get<std::string>());
                ac.constant = read_int(field(a, "const", "constraint"), "guard constant");
                if (ac.constant < 0) throw perr("negative_constant", "guard constant " + std::to_string(ac.constant));
                tr.guard.atoms.push_back(ac);
            }
        }
        if (t.contains("reset")) {
            std::set<int> rs;
            for (const auto& r : t["reset"]) {
                int ci = clock_index(r.get<std::string>());
                if (!rs.insert(ci).second) throw perr("duplicate_name", "reset of clock " + r.get<std::string>());
                tr.resets.push_back(ci);
            }
        }
        tr.weight = t.contains("weight") ? read_int(t["weight"], "transition weight") : 0;
        g.transitions.push_back(std::move(tr));
    }
    return g;
}

std::string serialize_game(const GameDef& g) {
    json doc;
    doc["clocks"] = g.clocks;
    doc["clock_bound"] = g.clock_bound;
    json locs = json::array();
    for (const auto& l : g.locations) {
        json j;
        j["name"] = l.name;
        j["owner"] = owner_name(l.owner);
        j["rate"] = l.rate;
        j["target"] = l.owner == Owner::Target;
        locs.push_back(j);
    }
    doc["locations"] = locs;
    json trs = json::array();
    for (const auto& t : g.transitions) {
        json j;
        j["from"] = g.locations[t.from].name;
        j["to"] = g.locations[t.to].name;
        json guard = json::array();
        for (const auto& a : t.guard.atoms)
            guard.push_back(json{{"clock", g.clocks[a.clock]}, {"op", op_name(a.op)}, {"const", a.constant}});
        j["guard"] = guard;
        json reset = json::array();
        for (int r : t.resets) reset.push_back(g.clocks[r]);
        j["reset"] = reset;
        j["weight"] = t.weight;
        trs.push_back(j);
    }
    doc["transitions"] = trs;
    return doc.dump(2) + "\n";
}

GameDef load_game_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot_open", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_game(ss.str());
}

}  // namespace wtg
