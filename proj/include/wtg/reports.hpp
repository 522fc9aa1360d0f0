#pragma once

#include "wtg/analysis.hpp"

#include <string>

namespace wtg {

// Divergence verdict, SCC signs, witness cycle and value classes.
struct CheckResult {
    RegionGame rg;
    SccInfo scc;
    DivergenceReport divergence;
    std::optional<ValueClassification> classes;  // only for divergent games
};
CheckResult run_check(const GameDef& g);
std::string check_to_json(const CheckResult& r);

// States, edges and SCC ids of the complete region game.
std::string regions_to_json(const RegionGame& rg, const SccInfo& scc);

}  // namespace wtg
