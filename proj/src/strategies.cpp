#include "wtg/strategies.hpp"
#include "wtg/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace wtg {

using json = nlohmann::ordered_json;

// ── Delay rules ──────────────────────────────────────────────────────

Rational DelayRule::delay_from(const Rational& x) const {
    switch (kind) {
        case DelayKind::Immediate: return 0;
        case DelayKind::ToPoint: return point - x;
        case DelayKind::ToPointInterior: {
            Rational half = (point - x) / 2;
            Rational back = slack < half ? slack : half;
            Rational d = point - back - x;
            return d;
        }
    }
    return 0;
}

std::string DelayRule::str() const {
    switch (kind) {
        case DelayKind::Immediate: return "immediate";
        case DelayKind::ToPoint: return "to " + to_pq(point);
        case DelayKind::ToPointInterior: return "before " + to_pq(point) + " by " + to_pq(slack);
    }
    return "";
}

// ── Strategy lookups ─────────────────────────────────────────────────

std::optional<Action> MemorylessDetStrategy::at(int location, int cell) const {
    if (location < 0 || location >= static_cast<int>(table.size())) return std::nullopt;
    if (cell < 0 || cell >= static_cast<int>(table[location].size())) return std::nullopt;
    return table[location][cell];
}

std::optional<Action> MemorylessDetStrategy::decide(const Config& c) const {
    return at(c.location, cells.cell_of(c.valuation.at(0)));
}

Rational Mixture::total() const {
    Rational t = 0;
    for (const auto& a : atoms) t += a.prob;
    for (const auto& s : segments) t += s.prob;
    return t;
}

const std::optional<Mixture>& StochasticStrategy::at(int location, int cell) const {
    static const std::optional<Mixture> none;
    if (location < 0 || location >= static_cast<int>(table.size())) return none;
    if (cell < 0 || cell >= static_cast<int>(table[location].size())) return none;
    return table[location][cell];
}

StochasticStrategy StochasticStrategy::dirac(const MemorylessDetStrategy& s) {
    StochasticStrategy out;
    out.owner = s.owner;
    out.cells = s.cells;
    out.table.resize(s.table.size());
    for (std::size_t l = 0; l < s.table.size(); ++l) {
        out.table[l].resize(s.table[l].size());
        for (std::size_t c = 0; c < s.table[l].size(); ++c)
            if (s.table[l][c]) out.table[l][c] = Mixture{{StochasticAtom{1, *s.table[l][c], false}}, {}};
    }
    return out;
}

namespace {

Rational abs_q(const Rational& r) { return r < 0 ? Rational(-r) : r; }

ExtRational require_finite(const ExtRational& v, const std::string& where) {
    if (!v.finite()) throw Error("strategies", "infinite_value", "value is " + v.str() + " at " + where);
    return v;
}

Affine affine_through(const PAFunction& f, const Cell& c, const std::string& where) {
    if (c.point()) return Affine{0, require_finite(f.eval(c.lo), where).value};
    Rational q1 = c.lo + (c.hi - c.lo) / 3, q2 = c.lo + 2 * (c.hi - c.lo) / 3;
    Rational y1 = require_finite(f.eval(q1), where).value, y2 = require_finite(f.eval(q2), where).value;
    Rational slope = (y2 - y1) / (q2 - q1);
    Rational intercept = y1 - slope * q1;
    return Affine{slope, intercept};
}

bool same_on_cell(const Affine& a, const Affine& b, const Cell& c) {
    if (c.point()) return a.at(c.lo) == b.at(c.lo);
    return a == b;
}

// a >= b everywhere on the cell (affine maps: check both ends).
bool geq_on_cell(const Affine& a, const Affine& b, const Cell& c) {
    return a.at(c.lo) >= b.at(c.lo) && a.at(c.hi) >= b.at(c.hi);
}

Action realize_region_edge(const Solution& sol, const RegionGame& rg, const RegionEdge& e) {
    const Region& src = rg.states[e.from].region;
    const Region& g = e.guard_region;
    (void)sol;
    if (g == src) return Action{e.transition, DelayRule::immediate()};
    Rational d = region_lo(g);
    if (g.is_point(0)) return Action{e.transition, DelayRule::to_point(d)};
    return Action{e.transition, DelayRule::to_point(d + Rational(1, 2))};
}

MemorylessDetStrategy empty_strategy(const Solution& sol, Owner owner) {
    MemorylessDetStrategy s;
    s.owner = owner;
    s.cells = sol.cells;
    s.table.assign(sol.game.locations.size(), std::vector<std::optional<Action>>(sol.cells.cells.size()));
    return s;
}

int kind_order(CandidateKind k) { return static_cast<int>(k); }

// The candidate whose one-step cost is the value on the cell, by preference.
Action select_optimal(const Solution& sol, int loc, int cell, const Rational& step_eps, bool maximize) {
    const std::string where = sol.game.locations[loc].name + " " + sol.cells.cells[cell].str();
    const Cell& c = sol.cells.cells[cell];
    std::vector<Candidate> cands = candidate_moves(sol, loc, cell, step_eps);
    Affine v = value_on_cell(sol, loc, cell);
    for (const auto& cand : cands) {
        bool ok = maximize ? geq_on_cell(v, cand.limit, c) : geq_on_cell(cand.limit, v, c);
        if (!ok)
            throw Error("strategies", "not_fixpoint",
                        "move " + sol.game.transition_label(cand.action.transition) + " (" + cand.action.rule.str() +
                            ") beats the value at " + where);
    }
    std::vector<const Candidate*> match;
    for (const auto& cand : cands)
        if (same_on_cell(cand.limit, v, c)) match.push_back(&cand);
    if (match.empty()) throw Error("strategies", "not_fixpoint", "no move attains the value at " + where);
    std::stable_sort(match.begin(), match.end(), [](const Candidate* a, const Candidate* b) {
        if (a->exact != b->exact) return a->exact;
        if (a->kind != b->kind) return kind_order(a->kind) < kind_order(b->kind);
        if (a->action.transition != b->action.transition) return a->action.transition < b->action.transition;
        return a->action.rule.point < b->action.rule.point;
    });
    const Candidate* best = match.front();
    if (!best->exact && step_eps == 0)
        throw Error("strategies", "unattained_infimum",
                    std::string("the optimum at ") + where + " is only approached; use a positive epsilon");
    return best->action;
}

}  // namespace

// ── Candidates ───────────────────────────────────────────────────────

Affine value_on_cell(const Solution& sol, int location, int cell) {
    return affine_through(sol.value.loc.at(location), sol.cells.cells.at(cell),
                          sol.game.locations[location].name + " " + sol.cells.cells[cell].str());
}

std::vector<Candidate> candidate_moves(const Solution& sol, int location, int cell, const Rational& step_eps) {
    std::vector<Candidate> out;
    const int s = sol.pruned_state(location, cell);
    if (s < 0 || sol.pruned.is_target(s)) return out;
    const GameDef& g = sol.game;
    const Rational rate = g.locations[location].rate;
    const auto& cells = sol.cells.cells;
    for (int e : sol.pruned.out[s]) {
        const RegionEdge& re = sol.pruned.edges[e];
        const Transition& tr = g.transitions[re.transition];
        const Rational w = tr.weight;
        const int dest = sol.pruned.states[re.to].location;
        const bool reset = !tr.resets.empty();
        const std::string where = g.locations[dest].name;
        for (int c2 = cell; c2 < static_cast<int>(cells.size()); ++c2) {
            if (sol.cell_region(c2) != re.guard_region) continue;
            const Cell& D = cells[c2];
            Affine cont = reset ? Affine{0, require_finite(sol.value.loc[dest].eval(0), where).value}
                                : affine_through(sol.value.loc[dest], D, where + " " + D.str());
            auto to_fixed = [&](const Rational& u) { return Affine{-rate, u * rate + w + cont.at(u)}; };
            if (D.point()) {
                if (c2 == cell)
                    out.push_back({Action{re.transition, DelayRule::immediate()}, CandidateKind::Immediate,
                                   Affine{cont.slope, w + cont.intercept}, true});
                else
                    out.push_back({Action{re.transition, DelayRule::to_point(D.lo)}, CandidateKind::ToKnot,
                                   to_fixed(D.lo), true});
                continue;
            }
            const Rational tslope = rate + cont.slope;
            const Rational half = (D.hi - D.lo) / 2;
            Rational room = step_eps / (2 * (1 + abs_q(rate) + abs_q(cont.slope)));
            if (room > half) room = half;
            if (c2 == cell) {
                out.push_back({Action{re.transition, DelayRule::immediate()}, CandidateKind::Immediate,
                               Affine{cont.slope, w + cont.intercept}, true});
                if (tslope != 0)
                    out.push_back({Action{re.transition, DelayRule::interior(D.hi, room)}, CandidateKind::LeftLimit,
                                   to_fixed(D.hi), false});
                continue;
            }
            if (tslope == 0) {
                Rational mid = D.midpoint();
                out.push_back({Action{re.transition, DelayRule::to_point(mid)}, CandidateKind::ToKnot, to_fixed(mid), true});
                continue;
            }
            out.push_back({Action{re.transition, DelayRule::interior(D.hi, room)}, CandidateKind::LeftLimit,
                           to_fixed(D.hi), false});
            out.push_back({Action{re.transition, DelayRule::to_point(D.lo + room)}, CandidateKind::RightLimit,
                           to_fixed(D.lo), false});
        }
    }
    return out;
}

// ── Synthesis ────────────────────────────────────────────────────────

MemorylessDetStrategy synth_sigma1(const Solution& sol, const Rational& eps, const BigInt& K, bool include_minus_infinity) {
    if (eps < 0) throw Error("strategies", "bad_epsilon", "epsilon must be >= 0");
    if (K < 1) throw Error("strategies", "bad_K", "K must be >= 1");
    const Rational step_eps = eps / Rational(K);
    MemorylessDetStrategy s = empty_strategy(sol, Owner::Min);
    const GameDef& g = sol.game;
    for (int l = 0; l < static_cast<int>(g.locations.size()); ++l) {
        if (g.locations[l].owner != Owner::Min) continue;
        for (int c = 0; c < static_cast<int>(sol.cells.cells.size()); ++c) {
            if (sol.pruned_state(l, c) >= 0) {
                s.table[l][c] = select_optimal(sol, l, c, step_eps, false);
                continue;
            }
            if (!include_minus_infinity) continue;
            int fs = sol.full_state(l, c);
            if (fs < 0 || sol.classes.cls[fs] != ValueClass::MinusInfinity) continue;
            int e = sol.classes.buchi_edge[fs];
            if (e < 0) throw Error("strategies", "no_buchi_move", "no Büchi move at " + sol.full.state_name(fs));
            s.table[l][c] = realize_region_edge(sol, sol.full, sol.full.edges[e]);
        }
    }
    return s;
}

MemorylessDetStrategy synth_attractor(const Solution& sol) {
    const RegionGame& rg = sol.pruned;
    std::vector<bool> goal(rg.size()), all(rg.size(), true);
    for (std::size_t s = 0; s < rg.size(); ++s) goal[s] = rg.is_target(static_cast<int>(s));
    std::vector<int> rank = min_attractor(rg, goal, all);
    MemorylessDetStrategy st = empty_strategy(sol, Owner::Min);
    st.rank.assign(sol.game.locations.size(), std::vector<int>(sol.cells.cells.size(), -1));
    for (int l = 0; l < static_cast<int>(sol.game.locations.size()); ++l) {
        for (int c = 0; c < static_cast<int>(sol.cells.cells.size()); ++c) {
            int s = sol.pruned_state(l, c);
            if (s < 0) continue;
            st.rank[l][c] = rank[s];
            if (rg.is_target(s)) continue;
            if (rank[s] < 0) throw Error("strategies", "unreachable", "no path to a target from " + rg.state_name(s));
            int best = -1;
            for (int e : rg.out[s]) {
                const RegionEdge& re = rg.edges[e];
                if (rank[re.to] < 0 || rank[re.to] >= rank[s]) continue;
                if (best < 0) { best = e; continue; }
                const RegionEdge& be = rg.edges[best];
                if (rank[re.to] < rank[be.to] ||
                    (rank[re.to] == rank[be.to] && region_before(re.guard_region, be.guard_region)))
                    best = e;
            }
            if (best < 0) throw Error("strategies", "unreachable", "rank does not decrease from " + rg.state_name(s));
            st.table[l][c] = realize_region_edge(sol, rg, rg.edges[best]);
        }
    }
    return st;
}

BigInt compute_K(const WeightBounds& bounds, std::size_t rg_size, std::size_t n_locations, std::size_t alpha_cells,
                 const BigInt& N) {
    BigInt we = bounds.w_edge_max, R = static_cast<unsigned long>(rg_size);
    BigInt La = BigInt(static_cast<unsigned long>(n_locations)) * BigInt(static_cast<unsigned long>(alpha_cells));
    return (we * R * (La + 2) + N) * (R * (La + 1) + 1);
}

SwitchingStrategy synth_switching(const Solution& sol, const Rational& eps, const BigInt& N) {
    SwitchingStrategy sw;
    sw.K = compute_K(sol.bounds, sol.pruned.size(), sol.game.locations.size(), sol.cells.alpha_cells, N);
    sw.sigma1 = synth_sigma1(sol, eps, sw.K);
    sw.sigma2 = synth_attractor(sol);
    return sw;
}

MemorylessDetStrategy synth_max_memoryless(const Solution& sol, const Rational& eps) {
    if (eps < 0) throw Error("strategies", "bad_epsilon", "epsilon must be >= 0");
    BigInt K = compute_K(sol.bounds, sol.pruned.size(), sol.game.locations.size(), sol.cells.alpha_cells, 0);
    if (K < 1) K = 1;
    const Rational step_eps = eps / Rational(K);
    MemorylessDetStrategy s = empty_strategy(sol, Owner::Max);
    for (int l = 0; l < static_cast<int>(sol.game.locations.size()); ++l) {
        if (sol.game.locations[l].owner != Owner::Max) continue;
        for (int c = 0; c < static_cast<int>(sol.cells.cells.size()); ++c)
            if (sol.pruned_state(l, c) >= 0) s.table[l][c] = select_optimal(sol, l, c, step_eps, true);
    }
    return s;
}

MemorylessDetStrategy random_memoryless(const Solution& sol, Owner owner, const Rational& step_eps, std::mt19937_64& rng) {
    MemorylessDetStrategy s = empty_strategy(sol, owner);
    for (int l = 0; l < static_cast<int>(sol.game.locations.size()); ++l) {
        if (sol.game.locations[l].owner != owner) continue;
        for (int c = 0; c < static_cast<int>(sol.cells.cells.size()); ++c) {
            std::vector<Candidate> cands = candidate_moves(sol, l, c, step_eps);
            if (step_eps == 0)
                cands.erase(std::remove_if(cands.begin(), cands.end(), [](const Candidate& k) { return !k.exact; }),
                            cands.end());
            if (cands.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
            s.table[l][c] = cands[pick(rng)].action;
        }
    }
    return s;
}

StochasticStrategy build_eta_p(const SwitchingStrategy& sw, const Solution& sol, const Rational& p) {
    if (p <= 0 || p >= 1) throw Error("strategies", "bad_p", "p must lie strictly between 0 and 1, got " + to_pq(p));
    StochasticStrategy out;
    out.owner = Owner::Min;
    out.cells = sw.sigma1.cells;
    out.table.resize(sw.sigma1.table.size());
    for (int l = 0; l < static_cast<int>(sw.sigma1.table.size()); ++l) {
        out.table[l].resize(sw.sigma1.table[l].size());
        for (int c = 0; c < static_cast<int>(sw.sigma1.table[l].size()); ++c) {
            const auto& a1 = sw.sigma1.table[l][c];
            if (!a1) continue;
            auto a2 = sw.sigma2.at(l, c);
            Mixture m;
            if (sol.scc_sign(l, c) == Sign::Negative && a2 && !(*a2 == *a1)) {
                m.atoms.push_back(StochasticAtom{p, *a1, false});
                m.atoms.push_back(StochasticAtom{1 - p, *a2, true});
            } else {
                m.atoms.push_back(StochasticAtom{1, *a1, false});
            }
            out.table[l][c] = std::move(m);
        }
    }
    return out;
}

PThreshold compute_p_threshold(const Rational& dv_sigma, const Rational& eps, const BigInt& K, const WeightBounds& bounds) {
    if (eps <= 0) throw Error("strategies", "bad_epsilon", "epsilon must be positive");
    if (K < 1 || !K.fits_ulong_p()) throw Error("strategies", "threshold_overflow", "K is out of range for 2^K");
    BigInt two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, K.get_ui());
    PThreshold t;
    Rational reach = 0;
    if (bounds.w_edge_max > 0) {
        Rational D(BigInt(4) * two_k * K * BigInt(bounds.w_edge_max));
        reach = D / (D + eps);
    }
    t.components.emplace_back("reach", reach);
    t.components.emplace_back("half", Rational(1, 2));
    if (dv_sigma < -5 * eps / 4) {
        Rational r = (dv_sigma + 5 * eps / 4) / (dv_sigma + eps);
        Rational tk(two_k);
        t.components.emplace_back("negative", tk / (tk + 1 - r));
    }
    t.p_tilde = t.components.front().second;
    for (const auto& [name, v] : t.components)
        if (v > t.p_tilde) t.p_tilde = v;
    return t;
}

// ── Random legal moves and empirical K ───────────────────────────────

namespace {

Rational random_fraction(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> d(1, 1023);
    return Rational(d(rng), 1024);
}

}  // namespace

std::size_t empirical_K(const Solution& sol, const MemorylessDetStrategy& sigma1, std::size_t plays, std::size_t max_len,
                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const RegionGame& rg = sol.pruned;
    std::vector<int> starts;
    for (std::size_t s = 0; s < rg.size(); ++s)
        if (!rg.is_target(static_cast<int>(s))) starts.push_back(static_cast<int>(s));
    if (starts.empty()) return 4;
    std::size_t longest = 0;
    std::uniform_int_distribution<std::size_t> pick_start(0, starts.size() - 1);
    for (std::size_t run = 0; run < plays; ++run) {
        int s0 = starts[pick_start(rng)];
        Config c{rg.states[s0].location, sample_valuation(rg.states[s0].region, rng)};
        std::vector<int> seq;
        std::vector<Rational> cum{0};
        for (std::size_t step = 0; step < max_len; ++step) {
            int s = rg.state_of(c);
            if (s < 0 || rg.is_target(s)) break;
            seq.push_back(s);
            int t;
            Rational delay;
            if (rg.owner(s) == Owner::Min) {
                auto a = sigma1.decide(c);
                if (!a) break;
                t = a->transition;
                delay = a->rule.delay_from(c.valuation[0]);
            } else {
                std::tie(t, delay) = random_legal_move(rg, c, rng);
            }
            EdgeResult r = apply_edge(sol.game, c, t, delay);
            cum.push_back(cum.back() + r.weight);
            c = r.next;
        }
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j)
                if (seq[i] == seq[j] && cum[j] - cum[i] > -1) longest = std::max(longest, j - i);
    }
    return 4 * (longest + 1);
}

std::pair<int, Rational> random_legal_move(const RegionGame& rg, const Config& c, std::mt19937_64& rng) {
    int s = rg.state_of(c);
    if (s < 0 || rg.out[s].empty()) throw Error("strategies", "no_move", "no legal move from " + valuation_str(rg.game, c.valuation));
    std::uniform_int_distribution<std::size_t> pick(0, rg.out[s].size() - 1);
    const RegionEdge& e = rg.edges[rg.out[s][pick(rng)]];
    const Rational& x = c.valuation.at(0);
    const Region& g = e.guard_region;
    Rational lo = region_lo(g);
    Rational u;
    if (g.is_point(0)) u = lo;
    else if (g == rg.states[s].region) u = x + (region_hi(g) - x) * random_fraction(rng) * Rational(1, 2);
    else u = lo + random_fraction(rng);
    return {e.transition, u - x};
}

bool move_allowed(const RegionGame& rg, const Config& c, int transition, const Rational& delay) {
    int s = rg.state_of(c);
    if (s < 0 || delay < 0) return false;
    Valuation moved = c.valuation;
    for (auto& v : moved) v += delay;
    Region g = region_of(moved);
    for (int e : rg.out[s]) {
        const RegionEdge& re = rg.edges[e];
        if (re.transition == transition && re.guard_region == g) return true;
    }
    return false;
}

bool strategy_valid_on_cells(const Solution& sol, const MemorylessDetStrategy& st, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const RegionGame& rg = sol.pruned;
    for (int l = 0; l < static_cast<int>(st.table.size()); ++l) {
        for (int c = 0; c < static_cast<int>(st.table[l].size()); ++c) {
            const auto& a = st.table[l][c];
            if (!a) continue;
            const Cell& cell = st.cells.cells[c];
            const std::string where = sol.game.locations[l].name + " " + cell.str();
            int s = rg.find(l, sol.cell_region(c));
            const RegionGame* game = &rg;
            if (s < 0) {
                s = sol.full.find(l, sol.cell_region(c));
                game = &sol.full;
            }
            if (s < 0) return fail("no region state for " + where);
            // The set of clock values the move fires at, as one region.
            Region landing;
            const DelayRule& r = a->rule;
            if (r.kind == DelayKind::Immediate) {
                landing = sol.cell_region(c);
            } else if (r.kind == DelayKind::ToPoint) {
                if (r.point < cell.hi) return fail("fires in the past at " + where);
                landing = region_of({r.point});
            } else {
                if (r.slack <= 0) return fail("zero slack at " + where);
                if (r.point < cell.hi || (cell.point() && r.point == cell.lo)) return fail("interior point behind " + where);
                Rational half = (r.point - cell.lo) / 2;
                Rational lo = r.point - (r.slack < half ? r.slack : half);
                Rational d = floor_q(lo);
                if (lo == d || r.point > d + 1) return fail("interior landing spans regions at " + where);
                landing = region_of({lo});
            }
            bool found = false;
            for (int e : game->out[s])
                if (game->edges[e].transition == a->transition && game->edges[e].guard_region == landing) found = true;
            if (!found) return fail("move " + sol.game.transition_label(a->transition) + " (" + r.str() + ") invalid at " + where);
        }
    }
    return true;
}

// ── JSON ─────────────────────────────────────────────────────────────

namespace {

json rule_json(const DelayRule& r) {
    json j;
    switch (r.kind) {
        case DelayKind::Immediate: j["rule"] = "immediate"; break;
        case DelayKind::ToPoint:
            j["rule"] = "to_point";
            j["point"] = to_pq(r.point);
            break;
        case DelayKind::ToPointInterior:
            j["rule"] = "to_point_interior";
            j["point"] = to_pq(r.point);
            j["slack"] = to_pq(r.slack);
            break;
    }
    return j;
}

DelayRule rule_from(const json& j) {
    std::string k = j.at("rule").get<std::string>();
    if (k == "immediate") return DelayRule::immediate();
    if (k == "to_point") return DelayRule::to_point(parse_rational(j.at("point").get<std::string>()));
    if (k == "to_point_interior")
        return DelayRule::interior(parse_rational(j.at("point").get<std::string>()),
                                   parse_rational(j.at("slack").get<std::string>()));
    throw Error("strategies", "bad_rule", "unknown delay rule " + k);
}

json atom_json(const GameDef& g, const Rational& prob, const Action& a, bool alt) {
    json j;
    j["prob"] = to_pq(prob);
    j["transition"] = a.transition;
    j["label"] = g.transition_label(a.transition);
    j["delay"] = rule_json(a.rule);
    if (alt) j["alt"] = true;
    return j;
}

json knots_json(const CellDecomposition& cd) {
    json k = json::array();
    for (const auto& q : cd.knots) k.push_back(to_pq(q));
    return k;
}

json cell_json(const Cell& c) { return json{{"lo", to_pq(c.lo)}, {"hi", to_pq(c.hi)}}; }

CellDecomposition cells_from_knots(const json& j) {
    CellDecomposition cd;
    for (const auto& k : j) cd.knots.push_back(parse_rational(k.get<std::string>()));
    if (cd.knots.empty() || !std::is_sorted(cd.knots.begin(), cd.knots.end()))
        throw Error("strategies", "bad_cells", "knots must be a non-empty increasing list");
    for (std::size_t i = 0; i < cd.knots.size(); ++i) {
        cd.cells.push_back(Cell{cd.knots[i], cd.knots[i]});
        if (i + 1 < cd.knots.size()) cd.cells.push_back(Cell{cd.knots[i], cd.knots[i + 1]});
    }
    cd.alpha_cells = cd.cells.size();
    return cd;
}

json det_json(const GameDef& g, const MemorylessDetStrategy& s) {
    json doc;
    doc["kind"] = "deterministic";
    doc["owner"] = owner_name(s.owner);
    doc["knots"] = knots_json(s.cells);
    json entries = json::array();
    for (std::size_t l = 0; l < s.table.size(); ++l)
        for (std::size_t c = 0; c < s.table[l].size(); ++c) {
            if (!s.table[l][c]) continue;
            json e;
            e["location"] = g.locations[l].name;
            e["cell"] = cell_json(s.cells.cells[c]);
            e["atoms"] = json::array({atom_json(g, 1, *s.table[l][c], false)});
            e["segments"] = json::array();
            if (!s.rank.empty()) e["rank"] = s.rank[l][c];
            entries.push_back(e);
        }
    doc["entries"] = entries;
    return doc;
}

json stoch_json(const GameDef& g, const StochasticStrategy& s) {
    json doc;
    doc["kind"] = "stochastic";
    doc["owner"] = owner_name(s.owner);
    doc["knots"] = knots_json(s.cells);
    json entries = json::array();
    for (std::size_t l = 0; l < s.table.size(); ++l)
        for (std::size_t c = 0; c < s.table[l].size(); ++c) {
            if (!s.table[l][c]) continue;
            json e;
            e["location"] = g.locations[l].name;
            e["cell"] = cell_json(s.cells.cells[c]);
            json atoms = json::array();
            for (const auto& a : s.table[l][c]->atoms) atoms.push_back(atom_json(g, a.prob, a.action, a.alt));
            e["atoms"] = atoms;
            json segs = json::array();
            for (const auto& sg : s.table[l][c]->segments)
                segs.push_back(json{{"prob", to_pq(sg.prob)},
                                    {"transition", sg.transition},
                                    {"label", g.transition_label(sg.transition)},
                                    {"lo", to_pq(sg.lo)},
                                    {"hi", to_pq(sg.hi)}});
            e["segments"] = segs;
            entries.push_back(e);
        }
    doc["entries"] = entries;
    return doc;
}

Owner owner_from(const std::string& s) {
    if (s == "min") return Owner::Min;
    if (s == "max") return Owner::Max;
    throw Error("strategies", "bad_owner", "strategy owner must be min or max, got " + s);
}

int location_of(const GameDef& g, const json& e) {
    std::string name = e.at("location").get<std::string>();
    int l = g.location_index(name);
    if (l < 0) throw Error("strategies", "unknown_location", name);
    return l;
}

int cell_of_json(const CellDecomposition& cd, const json& e) {
    Cell c{parse_rational(e.at("cell").at("lo").get<std::string>()), parse_rational(e.at("cell").at("hi").get<std::string>())};
    auto it = std::find(cd.cells.begin(), cd.cells.end(), c);
    if (it == cd.cells.end()) throw Error("strategies", "bad_cells", "cell " + c.str() + " is not a cell of the knots");
    return static_cast<int>(it - cd.cells.begin());
}

int transition_of(const GameDef& g, const json& a) {
    int t = a.at("transition").get<int>();
    if (t < 0 || t >= static_cast<int>(g.transitions.size()))
        throw Error("strategies", "unknown_transition", std::to_string(t));
    return t;
}

StochasticStrategy stoch_from(const GameDef& g, const json& doc) {
    StochasticStrategy s;
    s.owner = owner_from(doc.at("owner").get<std::string>());
    s.cells = cells_from_knots(doc.at("knots"));
    s.table.assign(g.locations.size(), std::vector<std::optional<Mixture>>(s.cells.cells.size()));
    for (const auto& e : doc.at("entries")) {
        int l = location_of(g, e), c = cell_of_json(s.cells, e);
        Mixture m;
        for (const auto& a : e.at("atoms"))
            m.atoms.push_back(StochasticAtom{parse_rational(a.at("prob").get<std::string>()),
                                             Action{transition_of(g, a), rule_from(a.at("delay"))},
                                             a.value("alt", false)});
        if (e.contains("segments"))
            for (const auto& sg : e.at("segments"))
                m.segments.push_back(UniformSegment{parse_rational(sg.at("prob").get<std::string>()), transition_of(g, sg),
                                                    parse_rational(sg.at("lo").get<std::string>()),
                                                    parse_rational(sg.at("hi").get<std::string>())});
        if (m.total() != 1)
            throw Error("strategies", "bad_mixture", "probabilities at " + e.at("location").get<std::string>() +
                                                         " sum to " + to_pq(m.total()));
        s.table[l][c] = std::move(m);
    }
    return s;
}

MemorylessDetStrategy det_from(const GameDef& g, const json& doc) {
    StochasticStrategy st = stoch_from(g, doc);
    MemorylessDetStrategy s;
    s.owner = st.owner;
    s.cells = st.cells;
    s.table.assign(st.table.size(), std::vector<std::optional<Action>>(s.cells.cells.size()));
    for (std::size_t l = 0; l < st.table.size(); ++l)
        for (std::size_t c = 0; c < st.table[l].size(); ++c) {
            if (!st.table[l][c]) continue;
            const Mixture& m = *st.table[l][c];
            if (m.atoms.size() != 1 || !m.segments.empty())
                throw Error("strategies", "not_deterministic", "entry with several atoms in a deterministic strategy");
            s.table[l][c] = m.atoms[0].action;
        }
    bool ranked = false;
    for (const auto& e : doc.at("entries")) ranked = ranked || e.contains("rank");
    if (ranked) {
        s.rank.assign(g.locations.size(), std::vector<int>(s.cells.cells.size(), -1));
        for (const auto& e : doc.at("entries"))
            if (e.contains("rank")) s.rank[location_of(g, e)][cell_of_json(s.cells, e)] = e.at("rank").get<int>();
    }
    return s;
}

}  // namespace

std::string strategy_to_json(const GameDef& g, const MemorylessDetStrategy& s) { return det_json(g, s).dump(2) + "\n"; }
std::string strategy_to_json(const GameDef& g, const StochasticStrategy& s) { return stoch_json(g, s).dump(2) + "\n"; }

std::string strategy_to_json(const GameDef& g, const SwitchingStrategy& s) {
    json doc;
    doc["kind"] = "switching";
    doc["K"] = s.K.get_str();
    doc["sigma1"] = det_json(g, s.sigma1);
    doc["sigma2"] = det_json(g, s.sigma2);
    return doc.dump(2) + "\n";
}

LoadedStrategy strategy_from_json(const GameDef& g, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("parse", "syntax", std::string("strategy file: ") + e.what());
    }
    LoadedStrategy out;
    try {
        out.kind = doc.at("kind").get<std::string>();
        if (out.kind == "deterministic") {
            out.deterministic = det_from(g, doc);
            out.stochastic = StochasticStrategy::dirac(*out.deterministic);
        } else if (out.kind == "stochastic") {
            out.stochastic = stoch_from(g, doc);
        } else if (out.kind == "switching") {
            SwitchingStrategy sw;
            sw.K = BigInt(doc.at("K").get<std::string>());
            sw.sigma1 = det_from(g, doc.at("sigma1"));
            sw.sigma2 = det_from(g, doc.at("sigma2"));
            out.switching = std::move(sw);
        } else {
            throw Error("strategies", "bad_kind", "unknown strategy kind " + out.kind);
        }
    } catch (const json::exception& e) {
        throw Error("parse", "schema", std::string("strategy file: ") + e.what());
    }
    return out;
}

}  // namespace wtg
