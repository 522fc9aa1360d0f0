#include "wtg/error.hpp"
#include "wtg/model.hpp"
#include "wtg/regions.hpp"

namespace wtg {

ValidationReport validate_game(const GameDef& g) {
    if (g.clock_bound < 0) throw Error("validate", "negative_bound", "clock_bound < 0");
    for (std::size_t t = 0; t < g.transitions.size(); ++t) {
        const auto& tr = g.transitions[t];
        const std::string label = g.transition_label(static_cast<int>(t));
        if (g.is_target(tr.from)) throw Error("validate", "transition_from_target", label);
        for (int x = 0; x < g.clock_count(); ++x) {
            ClockInterval iv = tr.guard.interval(x);
            if (iv.empty()) throw Error("validate", "contradictory_guard", label + " on clock " + g.clocks[x]);
            if (!iv.hi || *iv.hi > g.clock_bound)
                throw Error("validate", "unbounded_transition",
                            label + " does not bound clock " + g.clocks[x] + " by " + std::to_string(g.clock_bound));
        }
    }

    ValidationReport rep;
    rep.bounds = g.weight_bounds();
    RegionGame rg = build_region_game(g, RegionGameOptions{true});
    rep.region_states = all_regions(g.clock_count(), g.clock_bound).size() * g.locations.size();
    rep.reachable_states = rg.size();
    for (std::size_t s = 0; s < rg.size(); ++s) {
        if (rg.is_target(static_cast<int>(s))) continue;
        if (rg.out[s].empty())
            throw Error("validate", "deadlock", "no transition can ever fire from " + rg.state_name(static_cast<int>(s)));
    }
    return rep;
}

}  // namespace wtg
