#pragma once

#include "wtg/solver.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace wtg {

// ── Delay rules ──────────────────────────────────────────────────────

enum class DelayKind { Immediate, ToPoint, ToPointInterior };

// How long to wait before firing, as a function of the current clock value x.
// ToPointInterior(b, s) fires at b - min(s, (b - x)/2), strictly before b.
struct DelayRule {
    DelayKind kind = DelayKind::Immediate;
    Rational point = 0;
    Rational slack = 0;

    static DelayRule immediate() { return {}; }
    static DelayRule to_point(Rational b) { return {DelayKind::ToPoint, std::move(b), 0}; }
    static DelayRule interior(Rational b, Rational slack) { return {DelayKind::ToPointInterior, std::move(b), std::move(slack)}; }

    Rational delay_from(const Rational& x) const;
    std::string str() const;
    bool operator==(const DelayRule&) const = default;
};

struct Action {
    int transition = -1;
    DelayRule rule;
    bool operator==(const Action&) const = default;
};

// ── Strategies ───────────────────────────────────────────────────────

// One (transition, delay rule) per (location, cell). Cells are those of the
// solved value function; a missing entry means the strategy does not play there.
struct MemorylessDetStrategy {
    Owner owner = Owner::Min;
    CellDecomposition cells;
    std::vector<std::vector<std::optional<Action>>> table;  // [location][cell]
    std::vector<std::vector<int>> rank;                     // attractor certificate, empty unless built by synth_attractor

    std::optional<Action> at(int location, int cell) const;
    std::optional<Action> decide(const Config& c) const;
};

struct StochasticAtom {
    Rational prob;
    Action action;
    bool alt = false;  // taken with the (1-p) weight of a superposition
    bool operator==(const StochasticAtom&) const = default;
};

// Fires `transition` at a clock value drawn uniformly in [lo, hi] (absolute).
struct UniformSegment {
    Rational prob;
    int transition = -1;
    Rational lo, hi;
    bool operator==(const UniformSegment&) const = default;
};

struct Mixture {
    std::vector<StochasticAtom> atoms;
    std::vector<UniformSegment> segments;
    Rational total() const;
    bool operator==(const Mixture&) const = default;
};

struct StochasticStrategy {
    Owner owner = Owner::Min;
    CellDecomposition cells;
    std::vector<std::vector<std::optional<Mixture>>> table;

    const std::optional<Mixture>& at(int location, int cell) const;
    static StochasticStrategy dirac(const MemorylessDetStrategy& s);
};

struct SwitchingStrategy {
    MemorylessDetStrategy sigma1;
    MemorylessDetStrategy sigma2;
    BigInt K = 1;  // plays of length >= K follow sigma2
};

// ── Candidate moves ──────────────────────────────────────────────────

enum class CandidateKind { Immediate, ToKnot, LeftLimit, RightLimit };

// A cell-uniform move together with the one-step cost it approaches:
// cost(x) = limit.at(x) for x in the cell. `exact` when the realized cost
// equals the limit; otherwise it is within `step_eps` of it.
struct Candidate {
    Action action;
    CandidateKind kind = CandidateKind::Immediate;
    Affine limit;
    bool exact = true;
};

// Every candidate move from (location, cell) along pruned region edges,
// continuing with the solved value. Inexact moves are realized within
// `step_eps` of their limit; step_eps = 0 leaves them at slack 0 (unusable).
std::vector<Candidate> candidate_moves(const Solution& sol, int location, int cell, const Rational& step_eps);

// The value of `location` on `cell`, as an affine map.
Affine value_on_cell(const Solution& sol, int location, int cell);

// ── Synthesis ────────────────────────────────────────────────────────

// Min's fake-optimal strategy: on each cell, a move whose one-step cost
// reaches the value within eps/K. With include_minus_infinity, the -inf
// states of the unpruned game get the Büchi move from classification.
MemorylessDetStrategy synth_sigma1(const Solution& sol, const Rational& eps, const BigInt& K,
                                   bool include_minus_infinity = false);

// Rank-decreasing moves towards the targets on the pruned game, for every
// non-target cell (Max cells record the move used in the certificate).
MemorylessDetStrategy synth_attractor(const Solution& sol);

// (w^e|R|(|L|a+2)+N)(|R|(|L|a+1)+1)
BigInt compute_K(const WeightBounds& bounds, std::size_t rg_size, std::size_t n_locations, std::size_t alpha_cells,
                 const BigInt& N);

SwitchingStrategy synth_switching(const Solution& sol, const Rational& eps, const BigInt& N);

// Max's memoryless strategy: arg sup within eps/K_max, K_max = compute_K with N = 0.
MemorylessDetStrategy synth_max_memoryless(const Solution& sol, const Rational& eps);

// A uniformly random cell-uniform strategy for `owner` over the candidate moves.
MemorylessDetStrategy random_memoryless(const Solution& sol, Owner owner, const Rational& step_eps,
                                        std::mt19937_64& rng);

// Superposition: Dirac on sigma1 outside negative SCCs, p*sigma1 + (1-p)*sigma2 inside.
StochasticStrategy build_eta_p(const SwitchingStrategy& sw, const Solution& sol, const Rational& p);

struct PThreshold {
    Rational p_tilde;
    std::vector<std::pair<std::string, Rational>> components;
};

PThreshold compute_p_threshold(const Rational& dv_sigma, const Rational& eps, const BigInt& K,
                               const WeightBounds& bounds);

// A random move allowed by the region game from c: a random edge, then a
// random firing point inside its guard region.
std::pair<int, Rational> random_legal_move(const RegionGame& rg, const Config& c, std::mt19937_64& rng);
bool move_allowed(const RegionGame& rg, const Config& c, int transition, const Rational& delay);

// Smallest k such that every observed sigma1-conforming region cycle of
// length >= k weighs <= -1, times 4. Plays are sampled against random Max moves.
std::size_t empirical_K(const Solution& sol, const MemorylessDetStrategy& sigma1, std::size_t plays,
                        std::size_t max_len, std::uint64_t seed);

// Every entry's move is valid for every clock value of its cell.
bool strategy_valid_on_cells(const Solution& sol, const MemorylessDetStrategy& s, std::string* why = nullptr);

// ── JSON ─────────────────────────────────────────────────────────────

std::string strategy_to_json(const GameDef& g, const MemorylessDetStrategy& s);
std::string strategy_to_json(const GameDef& g, const StochasticStrategy& s);
std::string strategy_to_json(const GameDef& g, const SwitchingStrategy& s);

// Reads any of the three variants; deterministic files load as Dirac mixtures.
struct LoadedStrategy {
    std::string kind;  // "deterministic", "stochastic" or "switching"
    std::optional<MemorylessDetStrategy> deterministic;
    std::optional<StochasticStrategy> stochastic;
    std::optional<SwitchingStrategy> switching;
};
LoadedStrategy strategy_from_json(const GameDef& g, const std::string& text);

}  // namespace wtg
