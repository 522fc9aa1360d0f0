#pragma once

#include "wtg/regions.hpp"

#include <optional>
#include <vector>

namespace wtg {

enum class Sign { Positive, Negative, Trivial, Mixed };
const char* sign_name(Sign s);

struct SccSign {
    int scc = 0;
    Sign sign = Sign::Trivial;
    long min_weight = 0;  // over its simple cycles; meaningless for Trivial
    long max_weight = 0;
    std::size_t cycles = 0;
};

struct DivergenceReport {
    bool divergent = true;
    std::vector<SccSign> signs;  // indexed by SCC id
    std::vector<RegionCycle> cycles;
    std::optional<RegionCycle> witness;  // set when not divergent
};

DivergenceReport check_divergence(const RegionGame& rg, const SccInfo& scc, std::size_t cap = kDefaultCycleCap);
DivergenceReport check_divergence(const RegionGame& rg);

enum class ValueClass { Finite, PlusInfinity, MinusInfinity };
const char* value_class_name(ValueClass c);

struct ValueClassification {
    std::vector<ValueClass> cls;    // per state of the classified region game
    std::vector<int> target_rank;   // Min's attractor rank to targets, -1 outside
    std::vector<int> buchi_edge;    // Min's edge on MinusInfinity states, -1 elsewhere
    std::vector<int> trap_edge;     // Max's edge staying outside the attractor, -1 elsewhere
    std::size_t count(ValueClass c) const;
};

// Attractor for Min towards `goal` inside the states flagged in `within`.
// Max states are attracted only when all their edges lead into the attractor.
// Returns ranks (0 on goal states, -1 outside).
std::vector<int> min_attractor(const RegionGame& rg, const std::vector<bool>& goal,
                               const std::vector<bool>& within);

ValueClassification classify_values(const RegionGame& rg, const SccInfo& scc, const DivergenceReport& div);
ValueClassification classify_values(const RegionGame& rg);

// Keeps the Finite states only. `initial` (a state of rg, or -1) must survive.
RegionGame prune_game(const RegionGame& rg, const ValueClassification& cls, int initial = -1);

}  // namespace wtg
