#include "wtg/wtg.h"

#include "wtg/artifacts.hpp"
#include "wtg/emulate.hpp"
#include "wtg/error.hpp"
#include "wtg/reports.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstring>
#include <memory>
#include <set>
#include <sstream>

struct wtg_game {
    wtg::GameDef def;
};

struct wtg_solution {
    wtg::Solution sol;
};

namespace {

using json = nlohmann::ordered_json;
using wtg::Rational;

thread_local std::string last_error;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void set_error(const std::string& stage, const std::string& kind, const std::string& detail) {
    last_error = json{{"error", {{"stage", stage}, {"kind", kind}, {"detail", detail}}}}.dump();
}

// Runs f, translating exceptions into a status and the thread's last error.
template <class F>
wtg_status guarded(F&& f) {
    try {
        last_error.clear();
        f();
        return WTG_OK;
    } catch (const UsageError& e) {
        set_error("api", "usage", e.what());
        return WTG_ERROR_USAGE;
    } catch (const wtg::Error& e) {
        set_error(e.stage(), e.kind(), e.detail());
        return WTG_ERROR_DOMAIN;
    } catch (const std::bad_alloc&) {
        set_error("api", "out_of_memory", "allocation failed");
        return WTG_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        set_error("api", "internal", e.what());
        return WTG_ERROR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw UsageError(std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Rational rational_or(const char* text, const Rational& fallback) {
    return text && *text ? wtg::parse_rational(text) : fallback;
}

wtg::BigInt integer_or(const char* text, long fallback) {
    if (!text || !*text) return wtg::BigInt(fallback);
    Rational r = wtg::parse_rational(text);
    if (r.get_den() != 1) throw wtg::Error("parse", "not_integer", std::string("expected an integer, got ") + text);
    return r.get_num();
}

std::vector<Rational> rationals(const char* const* values, std::size_t count) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < count; ++i) {
        require(values[i], "p value");
        out.push_back(wtg::parse_rational(values[i]));
    }
    return out;
}

wtg::Config start_config(const wtg::GameDef& g, const wtg_start* s) {
    require(s, "start");
    require(s->location, "start location");
    int loc = g.location_index(s->location);
    if (loc < 0) throw wtg::Error("parse", "unknown_location", std::string("no location named ") + s->location);
    return wtg::Config{loc, {rational_or(s->clock, 0)}};
}

std::string eta_name(const Rational& p) {
    return "eta_" + p.get_num().get_str() + "_" + p.get_den().get_str();
}

// A loaded strategy with the view the engines consume; the view refers into
// the strategy, so the pair lives in one heap object.
struct LoadedView {
    wtg::LoadedStrategy loaded;
    std::unique_ptr<wtg::StrategyView> view;
    std::optional<wtg::StochasticStrategy> memoryless;  // for structural constants
};

std::unique_ptr<LoadedView> load_view(const wtg::GameDef& g, const char* text) {
    auto lv = std::make_unique<LoadedView>();
    lv->loaded = wtg::strategy_from_json(g, text);
    if (lv->loaded.switching) {
        lv->view = std::make_unique<wtg::SwitchingView>(*lv->loaded.switching);
    } else if (lv->loaded.deterministic) {
        lv->view = std::make_unique<wtg::DeterministicView>(*lv->loaded.deterministic);
        lv->memoryless = wtg::StochasticStrategy::dirac(*lv->loaded.deterministic);
    } else {
        lv->view = std::make_unique<wtg::StochasticView>(*lv->loaded.stochastic);
        lv->memoryless = lv->loaded.stochastic;
    }
    return lv;
}

std::optional<wtg::HypothesisConstants> constants_for(const wtg::Solution& sol, const LoadedView& min,
                                                      const wtg::Config& start) {
    if (!min.memoryless) return std::nullopt;
    try {
        return wtg::structural_constants(sol, *min.memoryless, start);
    } catch (const wtg::Error& e) {
        if (e.kind() == "not_proper") return std::nullopt;
        throw;
    }
}

json constants_json(const std::optional<wtg::HypothesisConstants>& c) {
    if (!c) return nullptr;
    return json{{"alpha", wtg::to_pq(c->alpha)}, {"m", c->m}};
}

}  // namespace

extern "C" {

const char* wtg_version(void) { return "1.0.0"; }

const char* wtg_last_error(void) { return last_error.c_str(); }

void wtg_string_free(char* s) { std::free(s); }

// ── Games ────────────────────────────────────────────────────────────

wtg_status wtg_game_from_json(const char* text, wtg_game** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        auto g = std::make_unique<wtg_game>();
        g->def = wtg::parse_game(text);
        *out = g.release();
    });
}

wtg_status wtg_game_from_file(const char* path, wtg_game** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto g = std::make_unique<wtg_game>();
        g->def = wtg::load_game_file(path);
        *out = g.release();
    });
}

wtg_status wtg_game_to_json(const wtg_game* game, char** out) {
    return guarded([&] {
        require(game, "game");
        require(out, "out");
        *out = dup(wtg::serialize_game(game->def));
    });
}

void wtg_game_free(wtg_game* game) { delete game; }

wtg_status wtg_check(const wtg_game* game, char** out_json, int* divergent) {
    return guarded([&] {
        require(game, "game");
        require(out_json, "out_json");
        wtg::CheckResult r = wtg::run_check(game->def);
        if (divergent) *divergent = r.divergence.divergent ? 1 : 0;
        *out_json = dup(wtg::check_to_json(r));
    });
}

wtg_status wtg_regions(const wtg_game* game, char** out_json) {
    return guarded([&] {
        require(game, "game");
        require(out_json, "out_json");
        wtg::validate_game(game->def);
        wtg::RegionGame rg = wtg::build_region_game(game->def);
        *out_json = dup(wtg::regions_to_json(rg, wtg::scc_decompose(rg)));
    });
}

// ── Values ───────────────────────────────────────────────────────────

wtg_status wtg_solve(const wtg_game* game, const wtg_solve_options* opt, wtg_solution** out) {
    return guarded([&] {
        require(game, "game");
        require(out, "out");
        wtg::SolveOptions so;
        if (opt && opt->max_iters > 0) so.max_iters = static_cast<std::size_t>(opt->max_iters);
        auto s = std::make_unique<wtg_solution>();
        s->sol = wtg::solve_game(game->def, so);
        const auto& cls = s->sol.classes;
        std::size_t infinite = cls.count(wtg::ValueClass::PlusInfinity) + cls.count(wtg::ValueClass::MinusInfinity);
        if (infinite > 0 && !(opt && opt->prune))
            throw wtg::Error("values", "needs_prune",
                             std::to_string(infinite) +
                                 " region states have value +inf or -inf; rerun with --prune to solve the finite part");
        *out = s.release();
    });
}

wtg_status wtg_solution_values(const wtg_solution* sol, char** out_json) {
    return guarded([&] {
        require(sol, "solution");
        require(out_json, "out_json");
        *out_json = dup(wtg::values_to_json(sol->sol));
    });
}

void wtg_solution_free(wtg_solution* sol) { delete sol; }

// ── Strategies ───────────────────────────────────────────────────────

wtg_status wtg_synth(const wtg_solution* sol, const wtg_synth_options* opt, char** out_json) {
    return guarded([&] {
        require(sol, "solution");
        require(out_json, "out_json");
        const wtg::Solution& s = sol->sol;
        Rational eps = rational_or(opt ? opt->epsilon : nullptr, Rational(1, 10));
        wtg::BigInt N = integer_or(opt ? opt->N : nullptr, 100);
        if (eps <= 0) throw wtg::Error("strategies", "bad_epsilon", "epsilon must be positive");
        wtg::SwitchingStrategy sw = wtg::synth_switching(s, eps, N);
        wtg::MemorylessDetStrategy tau = wtg::synth_max_memoryless(s, eps);
        json strategies;
        strategies["sigma1"] = json::parse(wtg::strategy_to_json(s.game, sw.sigma1));
        strategies["sigma2"] = json::parse(wtg::strategy_to_json(s.game, sw.sigma2));
        strategies["switching"] = json::parse(wtg::strategy_to_json(s.game, sw));
        strategies["max"] = json::parse(wtg::strategy_to_json(s.game, tau));
        if (opt)
            for (const Rational& p : rationals(opt->p_values, opt->p_count))
                strategies[eta_name(p)] = json::parse(wtg::strategy_to_json(s.game, wtg::build_eta_p(sw, s, p)));
        json doc{{"K", sw.K.get_str()}, {"epsilon", wtg::to_pq(eps)}, {"N", N.get_str()}, {"strategies", strategies}};
        *out_json = dup(doc.dump(2) + "\n");
    });
}

// ── Expectations ─────────────────────────────────────────────────────

wtg_status wtg_expect(const wtg_solution* sol, const char* min_strategy_json, const char* max_strategy_json,
                      const wtg_start* start, const wtg_expect_options* opt, char** out_json) {
    return guarded([&] {
        require(sol, "solution");
        require(min_strategy_json, "min strategy");
        require(out_json, "out_json");
        const wtg::Solution& s = sol->sol;
        wtg::Config st = start_config(s.game, start);
        auto min = load_view(s.game, min_strategy_json);
        if (min->loaded.kind != "switching" && min->memoryless->owner != wtg::Owner::Min)
            throw wtg::Error("expectation", "wrong_owner", "the --min strategy belongs to Max");
        wtg::CertifyOptions copt;
        copt.tol = rational_or(opt ? opt->tol : nullptr, copt.tol);
        if (opt && opt->max_horizon) copt.max_horizon = opt->max_horizon;
        auto c = constants_for(s, *min, st);
        json doc;
        wtg::CertifiedExpectation ce;
        if (max_strategy_json) {
            auto max = load_view(s.game, max_strategy_json);
            wtg::Profile pr{&s.game, min->view.get(), max->view.get()};
            ce = wtg::certified_expectation(pr, st, c, copt);
            doc["max"] = "file";
        } else {
            Rational eps = rational_or(opt ? opt->epsilon : nullptr, Rational(1, 10));
            wtg::BestResponse br = wtg::best_response(s, st, *min->view, eps, c, copt);
            ce = br.value;
            doc["max"] = "best-response";
            doc["best_response_estimate"] = br.approx_value;
            doc["best_response_nodes"] = br.nodes;
        }
        doc["value"] = wtg::to_pq(ce.value);
        doc["tail"] = wtg::to_pq(ce.tail);
        doc["horizon"] = ce.horizon;
        doc["value_decimal"] = wtg::to_decimal(ce.value);
        doc["reached_mass"] = wtg::to_pq(ce.reached_mass);
        doc["alive_mass"] = wtg::to_pq(ce.alive_mass);
        doc["constants"] = constants_json(c);
        *out_json = dup(doc.dump(2) + "\n");
    });
}

wtg_status wtg_simulate(const wtg_solution* sol, const char* min_strategy_json, const char* max_strategy_json,
                        const wtg_start* start, const wtg_simulate_options* opt, char** out_json, char** out_csv) {
    return guarded([&] {
        require(sol, "solution");
        require(min_strategy_json, "min strategy");
        require(out_json, "out_json");
        const wtg::Solution& s = sol->sol;
        wtg::Config st = start_config(s.game, start);
        auto min = load_view(s.game, min_strategy_json);
        std::unique_ptr<LoadedView> max;
        std::optional<wtg::BestResponse> br;
        const wtg::StrategyView* max_view = nullptr;
        if (max_strategy_json) {
            max = load_view(s.game, max_strategy_json);
            max_view = max->view.get();
        } else {
            Rational eps = rational_or(opt ? opt->epsilon : nullptr, Rational(1, 10));
            br = wtg::best_response(s, st, *min->view, eps, constants_for(s, *min, st));
            max_view = &br->strategy;
        }
        wtg::MonteCarloOptions mo;
        if (opt) {
            if (opt->runs) mo.runs = opt->runs;
            mo.seed = opt->seed;
            if (opt->max_steps) mo.max_steps = opt->max_steps;
            mo.zone_K = opt->zone_K;
        }
        mo.keep_weights = out_csv != nullptr;
        wtg::Profile pr{&s.game, min->view.get(), max_view};
        wtg::MonteCarloResult r = wtg::monte_carlo(pr, st, mo);
        json zones = json::array();
        for (int z = 0; z < 3; ++z)
            zones.push_back(json{{"count", r.zones.count[z]}, {"mass", r.zones.mass[z]}, {"mean_weight", r.zones.gamma[z]}});
        json doc{{"runs", r.runs},     {"seed", mo.seed},       {"reached", r.reached},
                 {"cutoff", r.cutoff}, {"mean", r.mean},        {"stddev", r.stddev},
                 {"ci95", r.ci95},     {"mean_length", r.mean_length}, {"zone_K", r.zones.K},
                 {"zones", zones},     {"max", max_strategy_json ? "file" : "best-response"}};
        *out_json = dup(doc.dump(2) + "\n");
        if (out_csv) {
            std::ostringstream o;
            o << "run,weight,weight_pq,reached\n";
            for (std::size_t i = 0; i < r.weights.size(); ++i)
                o << i << ',' << wtg::csv_double(r.weights[i]) << ',' << wtg::to_pq(Rational(r.weights[i])) << ','
                  << (r.reached_flags[i] ? 1 : 0) << '\n';
            *out_csv = dup(o.str());
        }
    });
}

wtg_status wtg_emulate(const wtg_game* game, const wtg_emulate_options* opt, char** out_json, char** out_csv,
                       char** out_svg) {
    return guarded([&] {
        require(game, "game");
        require(opt, "options");
        require(out_json, "out_json");
        wtg::EmulateOptions eo;
        eo.start = start_config(game->def, &opt->start);
        eo.eps = rational_or(opt->epsilon, eo.eps);
        eo.N = integer_or(opt->N, 100);
        if (opt->p_count) eo.p_grid = rationals(opt->p_values, opt->p_count);
        eo.seed = opt->seed;
        if (opt->mc_runs) eo.mc_runs = opt->mc_runs;
        wtg::EmulateReport r = wtg::cmd_emulate(game->def, opt->game_id ? opt->game_id : "game", eo);
        *out_json = dup(wtg::emulate_to_json(game->def, r));
        if (out_csv) *out_csv = dup(wtg::emulate_to_csv(r));
        if (out_svg) *out_svg = dup(wtg::emulate_to_svg(r));
    });
}

// ── Plots ────────────────────────────────────────────────────────────

wtg_status wtg_plot(const char* values_json, const char* location, char** out_svg, char** out_csv) {
    return guarded([&] {
        require(values_json, "values");
        require(location, "location");
        wtg::LoadedValues v = wtg::values_from_json(values_json);
        auto it = std::find(v.locations.begin(), v.locations.end(), location);
        if (it == v.locations.end())
            throw wtg::Error("parse", "unknown_location", std::string("no location named ") + location);
        const wtg::PAFunction& f = v.value.loc[it - v.locations.begin()];
        if (out_svg) {
            wtg::Series s{location, wtg::polylines(f)};
            *out_svg = dup(wtg::svg_plot(std::string("value of ") + location, "clock", "value", {s}));
        }
        if (out_csv) {
            std::set<Rational> xs(f.knots.begin(), f.knots.end());
            const int samples = 512;
            for (int k = 0; k < samples; ++k) xs.insert(f.lo() + (f.hi() - f.lo()) * Rational(k, samples - 1));
            std::ostringstream o;
            o << "x,x_pq,value,value_pq\n";
            for (const Rational& x : xs) {
                wtg::ExtRational y = f.eval(x);
                o << wtg::to_decimal(x) << ',' << wtg::to_pq(x) << ',';
                if (y.finite()) o << wtg::to_decimal(y.value) << ',' << wtg::to_pq(y.value);
                else o << (y.is_pos_inf() ? "inf,+inf" : "-inf,-inf");
                o << '\n';
            }
            *out_csv = dup(o.str());
        }
    });
}

}  // extern "C"
