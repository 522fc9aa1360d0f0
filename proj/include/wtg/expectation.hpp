#pragma once

#include "wtg/strategies.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace wtg {

// ── Strategy views ───────────────────────────────────────────────────

// A concrete move chosen with some probability at a configuration.
struct DecisionAtom {
    Rational prob;
    int transition = -1;
    Rational delay;
    bool alt = false;
};

// Fires `transition` after a delay drawn uniformly in [lo, hi].
struct DecisionSegment {
    Rational prob;
    int transition = -1;
    Rational lo, hi;
};

struct Decision {
    std::vector<DecisionAtom> atoms;
    std::vector<DecisionSegment> segments;
};

// What one player does at a configuration after `step` edges. Decisions may
// depend on the step only through phase(step), which is constant between
// consecutive values returned by next_phase_change.
class StrategyView {
public:
    virtual ~StrategyView() = default;
    virtual Decision decide(const Config& c, std::uint64_t step) const = 0;
    virtual std::uint64_t phase(std::uint64_t) const { return 0; }
    virtual std::uint64_t next_phase_change(std::uint64_t) const { return UINT64_MAX; }
};

class DeterministicView : public StrategyView {
public:
    explicit DeterministicView(const MemorylessDetStrategy& s) : s_(s) {}
    Decision decide(const Config& c, std::uint64_t step) const override;

private:
    const MemorylessDetStrategy& s_;
};

class StochasticView : public StrategyView {
public:
    explicit StochasticView(const StochasticStrategy& s) : s_(s) {}
    Decision decide(const Config& c, std::uint64_t step) const override;

private:
    const StochasticStrategy& s_;
};

// sigma1 while the play has fewer than K edges, sigma2 afterwards.
class SwitchingView : public StrategyView {
public:
    explicit SwitchingView(const SwitchingStrategy& s);
    Decision decide(const Config& c, std::uint64_t step) const override;
    std::uint64_t phase(std::uint64_t step) const override { return step < k_ ? 0 : 1; }
    std::uint64_t next_phase_change(std::uint64_t step) const override { return step < k_ ? k_ : UINT64_MAX; }

private:
    const SwitchingStrategy& s_;
    std::uint64_t k_;
};

// A fixed move per configuration (used for computed best responses).
class TableView : public StrategyView {
public:
    std::map<Config, std::pair<int, Rational>> moves;
    Decision decide(const Config& c, std::uint64_t step) const override;
};

class FunctionView : public StrategyView {
public:
    explicit FunctionView(std::function<Decision(const Config&, std::uint64_t)> f) : f_(std::move(f)) {}
    Decision decide(const Config& c, std::uint64_t step) const override { return f_(c, step); }

private:
    std::function<Decision(const Config&, std::uint64_t)> f_;
};

// Both players' strategies on one game; the owner of the current location decides.
struct Profile {
    const GameDef* game = nullptr;
    const StrategyView* min = nullptr;
    const StrategyView* max = nullptr;

    Decision decide(const Config& c, std::uint64_t step) const;
};

// ── Exact path quantities ────────────────────────────────────────────

using Path = std::vector<int>;  // transition indices

struct PathProbability {
    Path path;
    Rational prob;
};

struct PathExpectation {
    Path path;
    Rational value;
};

// Probability of following `path` from `start` (after `start_step` edges) and
// the expected weight collected on it. Atom-only: hitting a uniform segment throws.
PathProbability path_probability(const Profile& pr, const Config& start, const Path& path, std::uint64_t start_step = 0);
PathExpectation path_expectation(const Profile& pr, const Config& start, const Path& path, std::uint64_t start_step = 0);

// All paths of length <= max_len with positive probability, and their two quantities.
struct PathRecord {
    Path path;
    Rational prob;
    Rational expectation;
    bool reaches_target = false;
};
std::vector<PathRecord> enumerate_paths(const Profile& pr, const Config& start, std::size_t max_len,
                                        std::size_t cap = 2000000);

// ── Tail bounds ──────────────────────────────────────────────────────

// From any play, the targets are reached within m steps with probability >= alpha.
struct HypothesisConstants {
    Rational alpha;
    std::uint64_t m = 1;
};

// Sum over j > n of j * w_edge_max * (1 - alpha)^floor(j/m), in closed form.
Rational tail_bound(const HypothesisConstants& c, const WeightBounds& bounds, std::uint64_t n);

// Sum over j > n of j * w * mass * (1 - alpha)^floor((j - 1 - shift)/m): the
// bound used when certifying, where target paths of length j carry at most
// the mass still alive at length j - 1.
Rational shifted_tail(const HypothesisConstants& c, long w_edge_max, std::uint64_t n, std::uint64_t shift,
                      const Rational& mass);

// Sound constants for a memoryless stochastic Min strategy from `start`,
// computed on the cell graph against every Max behaviour. Picks the m with
// the fastest guaranteed decay among 1..m_max. Throws when no m works.
HypothesisConstants structural_constants(const Solution& sol, const StochasticStrategy& minS, const Config& start,
                                         std::uint64_t m_max = 0);

// ── Certified expectation ────────────────────────────────────────────

struct CertifyOptions {
    Rational tol = Rational(1, 100);
    std::uint64_t max_horizon = 200000;
    std::size_t max_width = 100000;
};

struct CertifiedExpectation {
    Rational value;  // sum of E over target paths of length <= horizon
    Rational tail;   // |true expectation - value| <= tail
    std::uint64_t horizon = 0;
    Rational reached_mass;
    Rational alive_mass;
};

// Breadth-first over configurations. Without constants the search must end
// with no alive mass; with constants, every level's alive mass is checked
// against (1 - alpha)^floor(n/m) and a violation is a certification failure.
CertifiedExpectation certified_expectation(const Profile& pr, const Config& start,
                                           const std::optional<HypothesisConstants>& c, const CertifyOptions& opt = {});

// ── Best response ────────────────────────────────────────────────────

struct BestResponseOptions {
    std::size_t max_nodes = 200000;
    std::size_t max_sweeps = 1000000;
    double precision = 1e-13;
};

struct BestResponse {
    TableView strategy;
    double approx_value = 0;   // value iteration estimate at the start
    std::size_t nodes = 0;     // configurations of the candidate graph
    std::size_t sweeps = 0;
    CertifiedExpectation value;
};

// Max's optimal stationary choice on the graph of configurations reachable
// from `start` when Min follows minS and Max uses the cell candidate moves
// (realized within eps/K_max). Value iteration in doubles picks the moves;
// their value is then certified exactly.
BestResponse best_response(const Solution& sol, const Config& start, const StrategyView& minS, const Rational& eps,
                           const std::optional<HypothesisConstants>& c, const CertifyOptions& copt = {},
                           const BestResponseOptions& opt = {});

// ── Monte Carlo ──────────────────────────────────────────────────────

// Zones of reaching plays with i alternative-atom choices and length j:
// zone 0 has i = 0 and j <= K, zone 1 has j > K, zone 2 holds the rest.
struct ZoneTally {
    std::uint64_t K = 0;
    std::uint64_t count[3] = {0, 0, 0};
    double mass[3] = {0, 0, 0};
    double gamma[3] = {0, 0, 0};  // mean weight per zone
};

struct MonteCarloOptions {
    std::uint64_t runs = 1000;
    std::uint64_t seed = 1;
    std::uint64_t max_steps = 100000;
    std::uint64_t zone_K = 0;
    bool keep_weights = false;
    std::size_t cache_limit = 1000000;
};

struct MonteCarloResult {
    double mean = 0;
    double stddev = 0;
    double ci95 = 0;
    std::uint64_t runs = 0;
    std::uint64_t reached = 0;
    std::uint64_t cutoff = 0;
    double mean_length = 0;
    ZoneTally zones;
    std::vector<double> weights;  // per run, when kept (cut-off runs hold their partial weight)
    std::vector<bool> reached_flags;
};

// The run's generator is seeded with splitmix64(seed + run * 0x9E3779B97F4A7C15).
std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run);

MonteCarloResult monte_carlo(const Profile& pr, const Config& start, const MonteCarloOptions& opt);

}  // namespace wtg
