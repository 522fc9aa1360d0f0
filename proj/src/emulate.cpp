#include "wtg/emulate.hpp"
#include "wtg/artifacts.hpp"
#include "wtg/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wtg {

using json = nlohmann::ordered_json;

namespace {

json threshold_json(const PThreshold& t) {
    json comps = json::object();
    for (const auto& [name, v] : t.components) comps[name] = to_decimal(v);
    return comps;
}

}  // namespace

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

EmulateReport cmd_emulate(const GameDef& game, const std::string& game_id, const EmulateOptions& opt) {
    Solution sol = solve_game(game);
    const Config& start = opt.start;
    if (start.location < 0 || start.location >= static_cast<int>(game.locations.size()) || start.valuation.size() != 1)
        throw Error("emulate", "bad_start", "start configuration does not match the game");
    int cell = sol.cells.cell_of(start.valuation[0]);
    if (cell < 0 || sol.pruned_state(start.location, cell) < 0)
        throw Error("emulate", "start_not_finite", "start configuration is not in the finite part of the game");

    EmulateReport r;
    r.game_id = game_id;
    r.start = start;
    r.eps = opt.eps;
    r.N = opt.N;
    ExtRational dv = sol.value.at(start.location, start.valuation[0]);
    if (!dv.finite()) throw Error("emulate", "start_not_finite", "value at the start is " + dv.str());
    r.dval = dv.value;
    Rational dv_sigma = std::max(Rational(-opt.N), r.dval);
    r.bound = dv_sigma + 3 * opt.eps;

    SwitchingStrategy sw = synth_switching(sol, opt.eps, opt.N);
    r.K_formula = sw.K;
    r.K_empirical = empirical_K(sol, sw.sigma1, opt.empirical_plays, opt.empirical_max_len, opt.seed);
    r.threshold_formula = compute_p_threshold(dv_sigma, opt.eps, r.K_formula, sol.bounds);
    r.threshold_empirical = compute_p_threshold(dv_sigma, opt.eps, BigInt(static_cast<unsigned long>(r.K_empirical)), sol.bounds);
    r.threshold_formula_digits = mpz_sizeinbase(r.threshold_formula.p_tilde.get_den_mpz_t(), 10);
    Rational one_minus = 1 - r.threshold_formula.p_tilde;
    r.log10_one_minus_threshold = one_minus > 0 ? log10_q(one_minus) : -INFINITY;

    for (const Rational& p : opt.p_grid) {
        EmulateRow row;
        row.p = p;
        StochasticStrategy eta = build_eta_p(sw, sol, p);
        StochasticView view(eta);
        row.constants = structural_constants(sol, eta, start);
        BestResponse br = best_response(sol, start, view, opt.eps, row.constants, opt.certify);
        row.value = br.value;
        row.best_response_estimate = br.approx_value;
        row.best_response_nodes = br.nodes;
        row.gap = abs(row.value.value - r.dval);
        Profile pr{&game, &view, &br.strategy};
        MonteCarloOptions mo;
        mo.runs = opt.mc_runs;
        mo.seed = opt.seed;
        mo.zone_K = r.K_empirical;
        row.simulation = monte_carlo(pr, start, mo);
        r.rows.push_back(std::move(row));
    }

    if (!r.rows.empty()) {
        const auto& last = r.rows.back().value;
        r.pass = last.value + last.tail <= r.bound;
    }
    r.monotone = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        if (r.rows[i].gap > r.rows[i - 1].gap + r.rows[i].value.tail + r.rows[i - 1].value.tail) r.monotone = false;
    return r;
}

std::string emulate_to_json(const GameDef& game, const EmulateReport& r) {
    json doc;
    doc["game"] = r.game_id;
    doc["start"] = json{{"location", game.locations.at(r.start.location).name}, {"clock", to_pq(r.start.valuation.at(0))}};
    doc["dval"] = to_pq(r.dval);
    doc["epsilon"] = to_pq(r.eps);
    doc["N"] = r.N.get_str();
    doc["bound"] = to_pq(r.bound);
    json formula;
    formula["K"] = r.K_formula.get_str();
    formula["p_tilde_denominator_digits"] = r.threshold_formula_digits;
    formula["log10_one_minus_p_tilde"] = r.log10_one_minus_threshold;
    formula["components"] = threshold_json(r.threshold_formula);
    doc["formula"] = formula;
    json empirical;
    empirical["K"] = r.K_empirical;
    empirical["p_tilde"] = to_pq(r.threshold_empirical.p_tilde);
    empirical["components"] = threshold_json(r.threshold_empirical);
    empirical["note"] = "K_empirical is the zone boundary of the simulation tallies";
    doc["empirical"] = empirical;
    json grid = json::array();
    for (const auto& row : r.rows) grid.push_back(to_pq(row.p));
    doc["p_grid"] = grid;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json j;
        j["p"] = to_pq(row.p);
        j["value"] = to_pq(row.value.value);
        j["tail"] = to_pq(row.value.tail);
        j["horizon"] = row.value.horizon;
        j["gap"] = to_pq(row.gap);
        j["alpha"] = to_pq(row.constants.alpha);
        j["m"] = row.constants.m;
        j["best_response_estimate"] = row.best_response_estimate;
        j["best_response_nodes"] = row.best_response_nodes;
        const auto& mc = row.simulation;
        json zones = json::array();
        for (int z = 0; z < 3; ++z)
            zones.push_back(json{{"count", mc.zones.count[z]}, {"mass", mc.zones.mass[z]}, {"mean_weight", mc.zones.gamma[z]}});
        j["simulation"] = json{{"runs", mc.runs}, {"reached", mc.reached}, {"mean", mc.mean}, {"ci95", mc.ci95},
                               {"zones", zones}};
        j["within_bound"] = row.value.value + row.value.tail <= r.bound;
        rows.push_back(j);
    }
    doc["rows"] = rows;
    doc["pass"] = r.pass;
    doc["monotone"] = r.monotone;
    return doc.dump(2) + "\n";
}

std::string emulate_to_csv(const EmulateReport& r) {
    std::ostringstream o;
    o << "p,p_pq,value,value_pq,tail,tail_pq,gap,gap_pq,bound,bound_pq,best_response_estimate,mc_mean,mc_ci95,"
         "zone0,zone1,zone2,within_bound\n";
    for (const auto& row : r.rows) {
        const auto& mc = row.simulation;
        o << to_decimal(row.p) << ',' << to_pq(row.p) << ',' << to_decimal(row.value.value) << ','
          << to_pq(row.value.value) << ',' << to_decimal(row.value.tail) << ',' << to_pq(row.value.tail) << ','
          << to_decimal(row.gap) << ',' << to_pq(row.gap) << ',' << to_decimal(r.bound) << ',' << to_pq(r.bound) << ','
          << csv_double(row.best_response_estimate) << ',' << csv_double(mc.mean) << ',' << csv_double(mc.ci95) << ','
          << mc.zones.count[0] << ',' << mc.zones.count[1] << ',' << mc.zones.count[2] << ','
          << (row.value.value + row.value.tail <= r.bound ? 1 : 0) << '\n';
    }
    return o.str();
}

std::string emulate_to_svg(const EmulateReport& r) {
    Series value{"certified value", {{}}}, upper{"value + tail", {{}}}, dval{"dVal", {{}}}, bound{"bound", {{}}};
    for (const auto& row : r.rows) {
        value.lines[0].emplace_back(row.p, row.value.value);
        upper.lines[0].emplace_back(row.p, row.value.value + row.value.tail);
        dval.lines[0].emplace_back(row.p, r.dval);
        bound.lines[0].emplace_back(row.p, r.bound);
    }
    return svg_plot("eta^p against the best response: " + r.game_id, "p", "expected weight", {value, upper, dval, bound});
}

}  // namespace wtg
