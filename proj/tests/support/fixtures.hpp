#pragma once

#include "wtg/expectation.hpp"

#include <string>

namespace wtg::testing {

std::string data_path(const std::string& file);
GameDef load_fixture(const std::string& file);  // e.g. "mixed_signs.json"

// The mixed_signs game with the weight of the l5 self-loop raised to 3: its loop
// weighs 3 - 2d for delays d in (1, 3], so it is no longer divergent.
GameDef mixed_signs_loop_weight3();

// Min's strategy of the example game with a divergent expectation: at clock
// x = 1 - 1/i it waits 1/i - 1/(i+1), then loops with probability x and
// exits with probability 1 - x. Plays start at x = 1/2, so the play of
// length n has probability 1/(n(n+1)).
FunctionView divergent_series_strategy();

// Values of `location` at the clocks 0, step, 2 step, ..., M by value
// iteration on that grid (delays restricted to the grid), over at most
// `horizon` rounds. Moves are the guard-satisfying ones between states of the
// pruned region game; iteration starts from +inf off the targets, as the
// value operator does.
std::vector<ExtRational> grid_values(const Solution& sol, int location, const Rational& step, std::size_t horizon);

}  // namespace wtg::testing
