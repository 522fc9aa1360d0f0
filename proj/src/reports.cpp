#include "wtg/reports.hpp"

#include <json.hpp>

namespace wtg {

using json = nlohmann::ordered_json;

namespace {

json cycle_json(const RegionGame& rg, const RegionCycle& c) {
    json states = json::array(), transitions = json::array();
    for (int s : c.states) states.push_back(rg.state_name(s));
    for (int t : c.transitions) transitions.push_back(rg.game.transition_label(t));
    return json{{"states", states}, {"transitions", transitions}, {"min_weight", c.min_weight},
                {"max_weight", c.max_weight}, {"scc", c.scc}};
}

}  // namespace

CheckResult run_check(const GameDef& g) {
    validate_game(g);
    CheckResult r;
    r.rg = build_region_game(g);
    r.scc = scc_decompose(r.rg);
    r.divergence = check_divergence(r.rg, r.scc);
    if (r.divergence.divergent) r.classes = classify_values(r.rg, r.scc, r.divergence);
    return r;
}

std::string check_to_json(const CheckResult& r) {
    json doc;
    doc["divergent"] = r.divergence.divergent;
    json sccs = json::array();
    for (std::size_t i = 0; i < r.divergence.signs.size(); ++i) {
        const SccSign& s = r.divergence.signs[i];
        if (s.sign == Sign::Trivial) continue;
        json states = json::array();
        for (int st : r.scc.members.at(i)) states.push_back(r.rg.state_name(st));
        sccs.push_back(json{{"id", s.scc}, {"sign", sign_name(s.sign)}, {"min_cycle_weight", s.min_weight},
                            {"max_cycle_weight", s.max_weight}, {"simple_cycles", s.cycles}, {"states", states}});
    }
    doc["sccs"] = sccs;
    doc["witness"] = r.divergence.witness ? cycle_json(r.rg, *r.divergence.witness) : json(nullptr);
    if (r.classes) {
        json counts{{"finite", r.classes->count(ValueClass::Finite)},
                    {"plus_infinity", r.classes->count(ValueClass::PlusInfinity)},
                    {"minus_infinity", r.classes->count(ValueClass::MinusInfinity)}};
        json states = json::array();
        for (std::size_t s = 0; s < r.rg.size(); ++s)
            states.push_back(json{{"state", r.rg.state_name(static_cast<int>(s))},
                                  {"class", value_class_name(r.classes->cls[s])}});
        doc["classification"] = json{{"counts", counts}, {"states", states}};
    } else {
        doc["classification"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

std::string regions_to_json(const RegionGame& rg, const SccInfo& scc) {
    json doc;
    json states = json::array();
    for (std::size_t s = 0; s < rg.size(); ++s) {
        const RegionState& st = rg.states[s];
        states.push_back(json{{"id", s},
                              {"location", rg.game.locations[st.location].name},
                              {"region", st.region.str(rg.game.clocks)},
                              {"scc", scc.scc_of[s]}});
    }
    json edges = json::array();
    for (const RegionEdge& e : rg.edges)
        edges.push_back(json{{"from", e.from},
                             {"to", e.to},
                             {"transition", rg.game.transition_label(e.transition)},
                             {"guard_region", e.guard_region.str(rg.game.clocks)}});
    doc["states"] = states;
    doc["edges"] = edges;
    doc["scc_count"] = scc.members.size();
    return doc.dump(2) + "\n";
}

}  // namespace wtg
