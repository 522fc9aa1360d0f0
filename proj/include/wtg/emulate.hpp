#pragma once

#include "wtg/expectation.hpp"

#include <string>
#include <vector>

namespace wtg {

// ── Emulation experiment ─────────────────────────────────────────────
//
// Solve, synthesize the switching strategy, replace it by the memoryless
// superposition eta^p for each p of a grid, and certify its expectation
// against Max's best response.

struct EmulateOptions {
    Config start;
    Rational eps = Rational(1, 10);
    BigInt N = 100;
    std::vector<Rational> p_grid = {Rational(1, 2), Rational(3, 4), Rational(9, 10), Rational(99, 100)};
    std::uint64_t seed = 1;
    std::uint64_t mc_runs = 10000;
    std::size_t empirical_plays = 2000;
    std::size_t empirical_max_len = 200;
    CertifyOptions certify;
};

struct EmulateRow {
    Rational p;
    HypothesisConstants constants;
    CertifiedExpectation value;  // eta^p against the best response
    double best_response_estimate = 0;
    std::size_t best_response_nodes = 0;
    Rational gap;  // |value - dVal|
    MonteCarloResult simulation;
};

struct EmulateReport {
    std::string game_id;
    Config start;
    Rational dval;
    Rational eps;
    BigInt N;
    Rational bound;  // max(-N, dVal) + 3 eps

    BigInt K_formula;
    std::size_t K_empirical = 0;
    PThreshold threshold_formula;
    PThreshold threshold_empirical;
    std::size_t threshold_formula_digits = 0;  // decimal digits of the denominator of the formula threshold
    double log10_one_minus_threshold = 0;

    std::vector<EmulateRow> rows;
    bool pass = false;       // value + tail <= bound at the largest p
    bool monotone = false;   // gaps non-increasing up to the certified radii
};

// Errors of any stage propagate with their stage tag; a start outside the
// finite part of the game fails with {"emulate", "start_not_finite"}.
EmulateReport cmd_emulate(const GameDef& game, const std::string& game_id, const EmulateOptions& opt);

std::string emulate_to_json(const GameDef& game, const EmulateReport& r);
std::string emulate_to_csv(const EmulateReport& r);
std::string emulate_to_svg(const EmulateReport& r);

// Decimal with 12 significant digits, as used in every CSV.
std::string csv_double(double v);

}  // namespace wtg
