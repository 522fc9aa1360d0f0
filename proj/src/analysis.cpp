#include "wtg/analysis.hpp"
#include "wtg/error.hpp"

#include <algorithm>
#include <limits>

namespace wtg {

const char* sign_name(Sign s) {
    switch (s) {
        case Sign::Positive: return "positive";
        case Sign::Negative: return "negative";
        case Sign::Trivial: return "trivial";
        default: return "mixed";
    }
}

const char* value_class_name(ValueClass c) {
    switch (c) {
        case ValueClass::Finite: return "finite";
        case ValueClass::PlusInfinity: return "+inf";
        default: return "-inf";
    }
}

std::size_t ValueClassification::count(ValueClass c) const {
    return static_cast<std::size_t>(std::count(cls.begin(), cls.end(), c));
}

// ── Divergence ───────────────────────────────────────────────────────

DivergenceReport check_divergence(const RegionGame& rg, const SccInfo& scc, std::size_t cap) {
    DivergenceReport rep;
    rep.cycles = enumerate_simple_cycles(rg, scc, cap);
    rep.signs.resize(scc.members.size());
    for (std::size_t c = 0; c < scc.members.size(); ++c) {
        rep.signs[c].scc = static_cast<int>(c);
        rep.signs[c].min_weight = std::numeric_limits<long>::max();
        rep.signs[c].max_weight = std::numeric_limits<long>::min();
    }
    for (const auto& cyc : rep.cycles) {
        auto& s = rep.signs[cyc.scc];
        s.cycles++;
        s.min_weight = std::min(s.min_weight, cyc.min_weight);
        s.max_weight = std::max(s.max_weight, cyc.max_weight);
    }
    for (auto& s : rep.signs) {
        if (s.cycles == 0) {
            s.sign = Sign::Trivial;
            s.min_weight = s.max_weight = 0;
        } else if (s.min_weight >= 1) {
            s.sign = Sign::Positive;
        } else if (s.max_weight <= -1) {
            s.sign = Sign::Negative;
        } else {
            s.sign = Sign::Mixed;
            rep.divergent = false;
        }
    }
    if (!rep.divergent) {
        // Prefer a single cycle that is neither positive nor negative.
        for (const auto& cyc : rep.cycles)
            if (rep.signs[cyc.scc].sign == Sign::Mixed && cyc.min_weight < 1 && cyc.max_weight > -1) {
                rep.witness = cyc;
                break;
            }
        if (!rep.witness)
            for (const auto& cyc : rep.cycles)
                if (rep.signs[cyc.scc].sign == Sign::Mixed) { rep.witness = cyc; break; }
    }
    return rep;
}

DivergenceReport check_divergence(const RegionGame& rg) { return check_divergence(rg, scc_decompose(rg)); }

// ── Attractors ───────────────────────────────────────────────────────

std::vector<int> min_attractor(const RegionGame& rg, const std::vector<bool>& goal, const std::vector<bool>& within) {
    const std::size_t n = rg.size();
    std::vector<int> rank(n, -1);
    std::vector<int> pending(n, 0);  // Max: edges not yet known to enter the attractor
    for (std::size_t s = 0; s < n; ++s) pending[s] = static_cast<int>(rg.out[s].size());
    std::vector<int> frontier;
    for (std::size_t s = 0; s < n; ++s)
        if (within[s] && goal[s]) { rank[s] = 0; frontier.push_back(static_cast<int>(s)); }
    int level = 0;
    while (!frontier.empty()) {
        std::vector<int> next;
        ++level;
        for (int t : frontier) {
            for (int e : rg.in[t]) {
                int s = rg.edges[e].from;
                if (!within[s] || rank[s] >= 0) continue;
                if (rg.owner(s) == Owner::Max) {
                    if (--pending[s] == 0) { rank[s] = level; next.push_back(s); }
                } else if (rg.owner(s) == Owner::Min) {
                    rank[s] = level;
                    next.push_back(s);
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        frontier = std::move(next);
    }
    return rank;
}

ValueClassification classify_values(const RegionGame& rg, const SccInfo& scc, const DivergenceReport& div) {
    if (!div.divergent)
        throw Error("analysis", "not_divergent", "value classification needs a divergent game");
    const std::size_t n = rg.size();
    ValueClassification vc;
    vc.cls.assign(n, ValueClass::Finite);
    vc.buchi_edge.assign(n, -1);
    vc.trap_edge.assign(n, -1);

    std::vector<bool> all(n, true), targets(n, false);
    for (std::size_t s = 0; s < n; ++s) targets[s] = rg.is_target(static_cast<int>(s));
    vc.target_rank = min_attractor(rg, targets, all);

    std::vector<bool> inside(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        inside[s] = vc.target_rank[s] >= 0;
        if (!inside[s]) vc.cls[s] = ValueClass::PlusInfinity;
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (inside[s] || rg.owner(static_cast<int>(s)) != Owner::Max) continue;
        for (int e : rg.out[s])
            if (!inside[rg.edges[e].to]) { vc.trap_edge[s] = e; break; }
    }

    // Büchi objective for Min: visit negative-SCC states infinitely often.
    std::vector<bool> buchi(n, false);
    for (std::size_t s = 0; s < n; ++s)
        buchi[s] = inside[s] && div.signs[scc.scc_of[s]].sign == Sign::Negative;

    auto cpre = [&](std::size_t s, const std::vector<bool>& z) {
        const auto& out = rg.out[s];
        if (out.empty()) return false;
        if (rg.owner(static_cast<int>(s)) == Owner::Max)
            return std::all_of(out.begin(), out.end(), [&](int e) { return static_cast<bool>(z[rg.edges[e].to]); });
        return std::any_of(out.begin(), out.end(), [&](int e) { return static_cast<bool>(z[rg.edges[e].to]); });
    };

    std::vector<bool> z = inside;
    std::vector<int> rank;
    std::vector<bool> goal(n);
    while (true) {
        for (std::size_t s = 0; s < n; ++s) goal[s] = buchi[s] && z[s] && cpre(s, z);
        rank = min_attractor(rg, goal, inside);
        std::vector<bool> nz(n);
        for (std::size_t s = 0; s < n; ++s) nz[s] = rank[s] >= 0;
        if (nz == z) break;
        z = std::move(nz);
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!z[s]) continue;
        vc.cls[s] = ValueClass::MinusInfinity;
        if (rg.owner(static_cast<int>(s)) != Owner::Min) continue;
        for (int e : rg.out[s]) {
            int t = rg.edges[e].to;
            bool ok = goal[s] ? static_cast<bool>(z[t]) : (rank[t] >= 0 && rank[t] < rank[s]);
            if (ok) { vc.buchi_edge[s] = e; break; }
        }
    }
    return vc;
}

ValueClassification classify_values(const RegionGame& rg) {
    SccInfo scc = scc_decompose(rg);
    return classify_values(rg, scc, check_divergence(rg, scc));
}

// ── Pruning ──────────────────────────────────────────────────────────

RegionGame prune_game(const RegionGame& rg, const ValueClassification& cls, int initial) {
    if (cls.cls.size() != rg.size()) throw Error("analysis", "size_mismatch", "classification does not match game");
    if (initial >= 0 && cls.cls[initial] != ValueClass::Finite)
        throw Error("analysis", "initial_pruned",
                    "initial state " + rg.state_name(initial) + " has value " + value_class_name(cls.cls[initial]));
    RegionGame p;
    p.game = rg.game;
    std::vector<int> remap(rg.size(), -1);
    for (std::size_t s = 0; s < rg.size(); ++s) {
        if (cls.cls[s] != ValueClass::Finite) continue;
        remap[s] = static_cast<int>(p.states.size());
        p.states.push_back(rg.states[s]);
    }
    for (const auto& e : rg.edges) {
        if (remap[e.from] < 0 || remap[e.to] < 0) continue;
        RegionEdge ne = e;
        ne.from = remap[e.from];
        ne.to = remap[e.to];
        p.edges.push_back(ne);
    }
    p.reindex();
    for (std::size_t s = 0; s < p.size(); ++s)
        if (!p.is_target(static_cast<int>(s)) && p.out[s].empty())
            throw Error("analysis", "pruned_deadlock", "state " + p.state_name(static_cast<int>(s)) + " lost all its moves");
    return p;
}

}  // namespace wtg
