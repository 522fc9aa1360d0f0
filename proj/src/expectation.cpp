#include "wtg/expectation.hpp"
#include "wtg/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

namespace wtg {

// ── Views ────────────────────────────────────────────────────────────

namespace {

std::string where(const GameDef& g, const Config& c) {
    return g.locations.at(c.location).name + " at " + valuation_str(g, c.valuation);
}

}  // namespace

Decision DeterministicView::decide(const Config& c, std::uint64_t) const {
    auto a = s_.decide(c);
    if (!a) throw Error("expectation", "strategy_undefined", "no deterministic move for location " + std::to_string(c.location));
    Decision d;
    d.atoms.push_back(DecisionAtom{1, a->transition, a->rule.delay_from(c.valuation.at(0)), false});
    return d;
}

Decision StochasticView::decide(const Config& c, std::uint64_t) const {
    const auto& m = s_.at(c.location, s_.cells.cell_of(c.valuation.at(0)));
    if (!m) throw Error("expectation", "strategy_undefined", "no stochastic move for location " + std::to_string(c.location));
    Decision d;
    const Rational& x = c.valuation[0];
    for (const auto& a : m->atoms) d.atoms.push_back(DecisionAtom{a.prob, a.action.transition, a.action.rule.delay_from(x), a.alt});
    for (const auto& s : m->segments) d.segments.push_back(DecisionSegment{s.prob, s.transition, s.lo - x, s.hi - x});
    return d;
}

SwitchingView::SwitchingView(const SwitchingStrategy& s) : s_(s) {
    k_ = s.K.fits_ulong_p() ? static_cast<std::uint64_t>(s.K.get_ui()) : UINT64_MAX;
}

Decision SwitchingView::decide(const Config& c, std::uint64_t step) const {
    return DeterministicView(step < k_ ? s_.sigma1 : s_.sigma2).decide(c, step);
}

Decision TableView::decide(const Config& c, std::uint64_t) const {
    auto it = moves.find(c);
    if (it == moves.end()) throw Error("expectation", "strategy_undefined", "configuration outside the best-response table");
    Decision d;
    d.atoms.push_back(DecisionAtom{1, it->second.first, it->second.second, false});
    return d;
}

Decision Profile::decide(const Config& c, std::uint64_t step) const {
    switch (game->locations.at(c.location).owner) {
        case Owner::Target: return {};
        case Owner::Min:
            if (!min) throw Error("expectation", "strategy_undefined", "no Min strategy");
            return min->decide(c, step);
        case Owner::Max:
            if (!max) throw Error("expectation", "strategy_undefined", "no Max strategy");
            return max->decide(c, step);
    }
    return {};
}

// ── Exact path quantities ────────────────────────────────────────────

namespace {

struct Mass {
    Rational prob;
    Rational weighted;  // sum over the merged prefixes of P * weight
};

using Frontier = std::map<Config, Mass>;

void check_atoms_only(const GameDef& g, const Config& c, const Decision& d) {
    for (const auto& s : d.segments)
        if (s.prob > 0)
            throw Error("expectation", "continuous_delay",
                        "exact evaluation met a uniform delay segment at " + where(g, c));
}

// Follows transition t from every configuration of the frontier.
Frontier step_frontier(const Profile& pr, const Frontier& f, int t, std::uint64_t step) {
    Frontier next;
    for (const auto& [c, m] : f) {
        if (pr.game->is_target(c.location)) continue;
        Decision d = pr.decide(c, step);
        check_atoms_only(*pr.game, c, d);
        for (const auto& a : d.atoms) {
            if (a.transition != t || a.prob == 0) continue;
            EdgeResult r = apply_edge(*pr.game, c, t, a.delay);
            Mass& dst = next[r.next];
            dst.prob += a.prob * m.prob;
            dst.weighted += a.prob * (m.weighted + m.prob * r.weight);
        }
    }
    return next;
}

Mass follow(const Profile& pr, const Config& start, const Path& path, std::uint64_t start_step) {
    Frontier f{{start, Mass{1, 0}}};
    for (std::size_t i = 0; i < path.size() && !f.empty(); ++i) f = step_frontier(pr, f, path[i], start_step + i);
    Mass total{0, 0};
    for (const auto& [c, m] : f) {
        total.prob += m.prob;
        total.weighted += m.weighted;
    }
    return total;
}

}  // namespace

PathProbability path_probability(const Profile& pr, const Config& start, const Path& path, std::uint64_t start_step) {
    return PathProbability{path, follow(pr, start, path, start_step).prob};
}

PathExpectation path_expectation(const Profile& pr, const Config& start, const Path& path, std::uint64_t start_step) {
    return PathExpectation{path, follow(pr, start, path, start_step).weighted};
}

std::vector<PathRecord> enumerate_paths(const Profile& pr, const Config& start, std::size_t max_len, std::size_t cap) {
    std::vector<PathRecord> out;
    struct Item {
        Path path;
        Frontier f;
    };
    std::vector<Item> stack{{{}, Frontier{{start, Mass{1, 0}}}}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (!it.path.empty()) {
            PathRecord rec{it.path, 0, 0, pr.game->is_target(it.f.begin()->first.location)};
            for (const auto& [c, m] : it.f) {
                rec.prob += m.prob;
                rec.expectation += m.weighted;
            }
            out.push_back(std::move(rec));
            if (out.size() > cap) throw Error("expectation", "width_overflow", "more than " + std::to_string(cap) + " paths");
            if (out.back().reaches_target) continue;
        }
        if (it.path.size() >= max_len) continue;
        std::set<int> moves;
        for (const auto& [c, m] : it.f) {
            Decision d = pr.decide(c, it.path.size());
            check_atoms_only(*pr.game, c, d);
            for (const auto& a : d.atoms)
                if (a.prob > 0) moves.insert(a.transition);
        }
        for (auto t = moves.rbegin(); t != moves.rend(); ++t) {
            Item child{it.path, step_frontier(pr, it.f, *t, it.path.size())};
            child.path.push_back(*t);
            if (!child.f.empty()) stack.push_back(std::move(child));
        }
    }
    return out;
}

// ── Tail bounds ──────────────────────────────────────────────────────

namespace {

Rational pow_q(const Rational& q, std::uint64_t k) {
    if (k == 0) return 1;
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), k);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational from_u64(std::uint64_t v) {
    BigInt b;
    mpz_import(b.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return Rational(b);
}

// Sum over i >= i0 of (i + s) * q^floor(i/m), for 0 <= q < 1.
Rational block_sum(const Rational& q, std::uint64_t m, std::uint64_t i0, const Rational& s) {
    const std::uint64_t k0 = i0 / m;
    const Rational M = from_u64(m), I0 = from_u64(i0), K1 = from_u64(k0 + 1);
    const Rational end = K1 * M;  // first index of the next block
    const Rational cnt = end - I0;
    const Rational sum_i = (I0 + end - 1) * cnt / 2;
    const Rational qk0 = pow_q(q, k0);
    Rational total = qk0 * (sum_i + s * cnt);
    const Rational qk1 = qk0 * q;
    const Rational one_minus = 1 - q;
    const Rational g0 = qk1 / one_minus;
    const Rational g1 = qk1 * (K1 * one_minus + q) / (one_minus * one_minus);
    total += M * M * g1 + (M * (M - 1) / 2 + s * M) * g0;
    return total;
}

void check_constants(const HypothesisConstants& c) {
    if (c.alpha <= 0) throw Error("expectation", "no_bound", "alpha must be positive for a tail bound");
    if (c.alpha > 1) throw Error("expectation", "bad_constants", "alpha must be at most 1");
    if (c.m < 1) throw Error("expectation", "bad_constants", "m must be at least 1");
}

}  // namespace

Rational tail_bound(const HypothesisConstants& c, const WeightBounds& bounds, std::uint64_t n) {
    check_constants(c);
    return Rational(bounds.w_edge_max) * block_sum(1 - c.alpha, c.m, n + 1, 0);
}

Rational shifted_tail(const HypothesisConstants& c, long w_edge_max, std::uint64_t n, std::uint64_t shift,
                      const Rational& mass) {
    check_constants(c);
    if (shift > n) throw Error("expectation", "bad_constants", "shift beyond the horizon");
    return Rational(w_edge_max) * mass * block_sum(1 - c.alpha, c.m, n - shift, Rational(1) + from_u64(shift));
}

// ── Structural constants ─────────────────────────────────────────────

namespace {

// Cells a move can land in from any clock value of `cell`.
std::pair<int, int> landing_cells(const CellDecomposition& cd, int cell, const DelayRule& r) {
    const Cell& c = cd.cells[cell];
    switch (r.kind) {
        case DelayKind::Immediate: return {cell, cell};
        case DelayKind::ToPoint: {
            int k = cd.cell_of(r.point);
            return {k, k};
        }
        case DelayKind::ToPointInterior: {
            Rational half = (r.point - c.lo) / 2;
            Rational lo = r.point - (r.slack < half ? r.slack : half);
            int a = cd.cell_of(lo);
            int b = cd.cell_of(r.point);
            if (cd.cells[b].point()) --b;
            return {a, std::max(a, b)};
        }
    }
    return {cell, cell};
}

}  // namespace

HypothesisConstants structural_constants(const Solution& sol, const StochasticStrategy& minS, const Config& start,
                                         std::uint64_t m_max) {
    const GameDef& g = sol.game;
    const CellDecomposition& cd = sol.cells;
    const int C = static_cast<int>(cd.cells.size());
    const int L = static_cast<int>(g.locations.size());
    const int n = C * L;
    auto id = [&](int l, int c) { return l * C + c; };
    enum class Kind { Target, Min, Max, Outside };
    std::vector<Kind> kind(n, Kind::Outside);
    struct Choice {
        Rational prob;
        std::vector<int> succ;
    };
    std::vector<std::vector<Choice>> min_choices(n);
    std::vector<std::vector<int>> max_succ(n);

    for (int l = 0; l < L; ++l)
        for (int c = 0; c < C; ++c) {
            int v = id(l, c);
            if (g.is_target(l)) { kind[v] = Kind::Target; continue; }
            int s = sol.pruned_state(l, c);
            if (s < 0) continue;
            if (g.locations[l].owner == Owner::Min) {
                const auto& m = minS.at(l, c);
                if (!m) continue;
                kind[v] = Kind::Min;
                auto add = [&](const Rational& p, int t, int c_lo, int c_hi) {
                    const Transition& tr = g.transitions[t];
                    Choice ch{p, {}};
                    for (int k = c_lo; k <= c_hi; ++k) ch.succ.push_back(id(tr.to, tr.resets.empty() ? k : 0));
                    min_choices[v].push_back(std::move(ch));
                };
                for (const auto& a : m->atoms) {
                    auto [lo, hi] = landing_cells(cd, c, a.action.rule);
                    add(a.prob, a.action.transition, lo, hi);
                }
                for (const auto& sg : m->segments) add(sg.prob, sg.transition, cd.cell_of(sg.lo), cd.cell_of(sg.hi));
            } else {
                kind[v] = Kind::Max;
                for (int e : sol.pruned.out[s]) {
                    const RegionEdge& re = sol.pruned.edges[e];
                    const Transition& tr = g.transitions[re.transition];
                    for (int c2 = c; c2 < C; ++c2)
                        if (sol.cell_region(c2) == re.guard_region)
                            max_succ[v].push_back(id(tr.to, tr.resets.empty() ? c2 : 0));
                }
            }
        }

    // Cell-graph nodes reachable from the start.
    const int s0 = id(start.location, cd.cell_of(start.valuation.at(0)));
    std::vector<bool> seen(n, false);
    std::vector<int> todo{s0};
    seen[s0] = true;
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        auto visit = [&](int w) {
            if (!seen[w]) { seen[w] = true; todo.push_back(w); }
        };
        for (const auto& ch : min_choices[v])
            for (int w : ch.succ) visit(w);
        for (int w : max_succ[v]) visit(w);
    }

    if (m_max == 0) m_max = 2 * static_cast<std::uint64_t>(n) + 2;
    std::vector<Rational> reach(n, 0);
    for (int v = 0; v < n; ++v)
        if (kind[v] == Kind::Target) reach[v] = 1;
    std::optional<HypothesisConstants> best;
    double best_rate = -1;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        std::vector<Rational> next(n, 0);
        for (int v = 0; v < n; ++v) {
            if (!seen[v]) continue;
            switch (kind[v]) {
                case Kind::Target: next[v] = 1; break;
                case Kind::Outside: next[v] = 0; break;
                case Kind::Min:
                    for (const auto& ch : min_choices[v]) {
                        Rational worst = 1;
                        for (int w : ch.succ) worst = std::min(worst, reach[w]);
                        next[v] += ch.prob * worst;
                    }
                    break;
                case Kind::Max: {
                    Rational worst = 1;
                    for (int w : max_succ[v]) worst = std::min(worst, reach[w]);
                    next[v] = max_succ[v].empty() ? Rational(0) : worst;
                    break;
                }
            }
        }
        reach = std::move(next);
        Rational alpha = 1;
        for (int v = 0; v < n; ++v)
            if (seen[v] && kind[v] != Kind::Target) alpha = std::min(alpha, reach[v]);
        if (alpha <= 0) continue;
        double rate = alpha == 1 ? std::numeric_limits<double>::infinity()
                                 : -std::log1p(-to_double(alpha)) / static_cast<double>(m);
        if (rate > best_rate * (1 + 1e-9)) {
            best_rate = rate;
            best = HypothesisConstants{alpha, m};
        }
        if (alpha == 1) break;
    }
    if (!best)
        throw Error("expectation", "not_proper",
                    "no m <= " + std::to_string(m_max) + " gives a positive probability of reaching the targets");
    return *best;
}

// ── Certified expectation ────────────────────────────────────────────

CertifiedExpectation certified_expectation(const Profile& pr, const Config& start,
                                           const std::optional<HypothesisConstants>& c, const CertifyOptions& opt) {
    const GameDef& g = *pr.game;
    const long w = g.weight_bounds().w_edge_max;
    if (c) check_constants(*c);
    CertifiedExpectation res;
    res.value = 0;
    res.reached_mass = 0;
    if (g.is_target(start.location)) {
        res.tail = 0;
        res.alive_mass = 0;
        return res;
    }
    Frontier f{{start, Mass{1, 0}}};
    const Rational q = c ? Rational(1 - c->alpha) : Rational(0);
    Rational level_cap = 1;  // (1 - alpha)^floor(n/m)
    for (std::uint64_t n = 0;; ++n) {
        if (c && n > 0 && n % c->m == 0) level_cap *= q;
        Rational alive = 0;
        for (const auto& [cfg, m] : f) alive += m.prob;
        res.horizon = n;
        res.alive_mass = alive;
        if (alive == 0) {
            res.tail = 0;
            return res;
        }
        if (c) {
            if (alive > level_cap)
                throw Error("expectation", "certification_failed",
                            "alive mass " + to_decimal(alive) + " at length " + std::to_string(n) +
                                " exceeds (1-alpha)^floor(n/m) = " + to_decimal(level_cap) +
                                ": the constants do not hold for this strategy");
            res.tail = shifted_tail(*c, w, n, n, alive);
            if (res.tail <= opt.tol) return res;
        }
        if (n >= opt.max_horizon)
            throw Error("expectation", "certification_failed",
                        "no certificate within " + std::to_string(opt.max_horizon) + " steps (alive mass " +
                            to_decimal(alive) + ")");
        Frontier next;
        for (const auto& [cfg, m] : f) {
            Decision d = pr.decide(cfg, n);
            check_atoms_only(g, cfg, d);
            for (const auto& a : d.atoms) {
                if (a.prob == 0) continue;
                EdgeResult r = apply_edge(g, cfg, a.transition, a.delay);
                Rational p = a.prob * m.prob;
                Rational wsum = a.prob * (m.weighted + m.prob * r.weight);
                if (g.is_target(r.next.location)) {
                    res.value += wsum;
                    res.reached_mass += p;
                } else {
                    Mass& dst = next[r.next];
                    dst.prob += p;
                    dst.weighted += wsum;
                }
            }
        }
        if (next.size() > opt.max_width)
            throw Error("expectation", "width_overflow",
                        std::to_string(next.size()) + " configurations at length " + std::to_string(n + 1));
        f = std::move(next);
    }
}

// ── Best response ────────────────────────────────────────────────────

BestResponse best_response(const Solution& sol, const Config& start, const StrategyView& minS, const Rational& eps,
                           const std::optional<HypothesisConstants>& c, const CertifyOptions& copt,
                           const BestResponseOptions& opt) {
    const GameDef& g = sol.game;
    BigInt K = compute_K(sol.bounds, sol.pruned.size(), g.locations.size(), sol.cells.alpha_cells, 0);
    if (K < 1) K = 1;
    const Rational step_eps = eps / Rational(K);

    struct Branch {
        double prob;
        double weight;
        int next;
        int transition;
        Rational delay;
    };
    struct Node {
        Config config;
        Owner owner;
        std::vector<Branch> branches;
    };
    std::vector<Node> nodes;
    std::map<Config, int> index;
    auto node_of = [&](const Config& cfg) {
        auto it = index.find(cfg);
        if (it != index.end()) return it->second;
        if (nodes.size() >= opt.max_nodes)
            throw Error("expectation", "width_overflow",
                        "best-response graph exceeds " + std::to_string(opt.max_nodes) + " configurations");
        int id = static_cast<int>(nodes.size());
        index.emplace(cfg, id);
        nodes.push_back(Node{cfg, g.locations[cfg.location].owner, {}});
        return id;
    };
    node_of(start);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Config cfg = nodes[i].config;
        const Owner owner = nodes[i].owner;
        if (owner == Owner::Target) continue;
        std::vector<Branch> br;
        if (owner == Owner::Min) {
            Decision d = minS.decide(cfg, 0);
            check_atoms_only(g, cfg, d);
            for (const auto& a : d.atoms) {
                if (a.prob == 0) continue;
                EdgeResult r = apply_edge(g, cfg, a.transition, a.delay);
                br.push_back(Branch{to_double(a.prob), to_double(r.weight), node_of(r.next), a.transition, a.delay});
            }
        } else {
            int cell = sol.cells.cell_of(cfg.valuation.at(0));
            std::set<std::pair<int, Rational>> done;
            for (const auto& cand : candidate_moves(sol, cfg.location, cell, step_eps)) {
                Rational delay = cand.action.rule.delay_from(cfg.valuation[0]);
                if (!done.insert({cand.action.transition, delay}).second) continue;
                EdgeResult r = apply_edge(g, cfg, cand.action.transition, delay);
                br.push_back(Branch{1, to_double(r.weight), node_of(r.next), cand.action.transition, delay});
            }
            if (br.empty()) throw Error("expectation", "no_move", "Max has no candidate move at " + where(g, cfg));
        }
        nodes[i].branches = std::move(br);
    }

    std::vector<double> value(nodes.size(), 0.0);
    BestResponse out;
    out.nodes = nodes.size();
    for (std::size_t sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
        double change = 0;
        for (std::size_t k = nodes.size(); k-- > 0;) {
            const Node& nd = nodes[k];
            if (nd.owner == Owner::Target) continue;
            double v;
            if (nd.owner == Owner::Min) {
                v = 0;
                for (const auto& b : nd.branches) v += b.prob * (b.weight + value[b.next]);
            } else {
                v = -std::numeric_limits<double>::infinity();
                for (const auto& b : nd.branches) v = std::max(v, b.weight + value[b.next]);
            }
            change = std::max(change, std::fabs(v - value[k]) / (1 + std::fabs(v)));
            value[k] = v;
        }
        out.sweeps = sweep;
        if (change < opt.precision) break;
    }
    for (const auto& nd : nodes) {
        if (nd.owner != Owner::Max) continue;
        const Branch* best = nullptr;
        double best_v = -std::numeric_limits<double>::infinity();
        for (const auto& b : nd.branches) {
            double v = b.weight + value[b.next];
            if (!best || v > best_v + 1e-12 * (1 + std::fabs(best_v))) {
                best = &b;
                best_v = v;
            }
        }
        out.strategy.moves[nd.config] = {best->transition, best->delay};
    }
    out.approx_value = value[0];
    Profile pr{&g, &minS, &out.strategy};
    out.value = certified_expectation(pr, start, c, copt);
    return out;
}

// ── Monte Carlo ──────────────────────────────────────────────────────

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) {
    std::uint64_t z = seed + run * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct McBranch {
    double cum;
    double weight;
    bool alt;
    int next = -1;
    Config next_config;
};

struct McNode {
    Config config;
    bool terminal = false;
    bool deterministic = false;
    std::vector<McBranch> branches;
    std::vector<DecisionSegment> segments;
    std::vector<double> seg_cum;
};

struct McCache {
    const Profile& pr;
    std::map<std::pair<Config, std::pair<std::uint64_t, std::uint64_t>>, int> index;
    std::vector<McNode> nodes;

    explicit McCache(const Profile& p) : pr(p) {}

    std::pair<std::uint64_t, std::uint64_t> phase(std::uint64_t step) const {
        return {pr.min ? pr.min->phase(step) : 0, pr.max ? pr.max->phase(step) : 0};
    }

    int get(const Config& c, std::uint64_t step) {
        auto key = std::make_pair(c, phase(step));
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        McNode nd;
        nd.config = c;
        const GameDef& g = *pr.game;
        if (g.is_target(c.location)) {
            nd.terminal = true;
        } else {
            Decision d = pr.decide(c, step);
            double cum = 0;
            for (const auto& a : d.atoms) {
                if (a.prob == 0) continue;
                EdgeResult r = apply_edge(g, c, a.transition, a.delay);
                cum += to_double(a.prob);
                nd.branches.push_back(McBranch{cum, to_double(r.weight), a.alt, -1, r.next});
            }
            for (const auto& s : d.segments) {
                if (s.prob == 0) continue;
                cum += to_double(s.prob);
                nd.segments.push_back(s);
                nd.seg_cum.push_back(cum);
            }
            nd.deterministic = nd.branches.size() == 1 && nd.segments.empty() && d.atoms.size() >= 1;
            if (nd.branches.empty() && nd.segments.empty())
                throw Error("expectation", "strategy_undefined", "no move at " + where(g, c));
        }
        int id = static_cast<int>(nodes.size());
        nodes.push_back(std::move(nd));
        index.emplace(std::move(key), id);
        return id;
    }
};

}  // namespace

MonteCarloResult monte_carlo(const Profile& pr, const Config& start, const MonteCarloOptions& opt) {
    MonteCarloResult res;
    res.runs = opt.runs;
    res.zones.K = opt.zone_K;
    McCache cache(pr);
    const GameDef& g = *pr.game;
    double mean = 0, m2 = 0, len_sum = 0;
    double zone_weight[3] = {0, 0, 0};
    std::unordered_map<int, std::pair<std::uint64_t, double>> seen;
    for (std::uint64_t run = 0; run < opt.runs; ++run) {
        if (cache.nodes.size() > opt.cache_limit) {
            cache.nodes.clear();
            cache.index.clear();
        }
        std::mt19937_64 rng(run_seed(opt.seed, run));
        std::uint64_t step = 0, alts = 0;
        double weight = 0;
        int node = cache.get(start, 0);
        bool reached = false;
        seen.clear();
        while (true) {
            if (cache.nodes[node].terminal) {
                reached = true;
                break;
            }
            if (step >= opt.max_steps) break;
            const McNode& nd = cache.nodes[node];
            int bi = 0;
            if (nd.deterministic) {
                auto it = seen.find(node);
                if (it != seen.end()) {
                    // The play is periodic until the next phase change or the cut-off.
                    std::uint64_t period = step - it->second.first;
                    double cycle_weight = weight - it->second.second;
                    std::uint64_t bound = opt.max_steps;
                    if (pr.min) bound = std::min(bound, pr.min->next_phase_change(step));
                    if (pr.max) bound = std::min(bound, pr.max->next_phase_change(step));
                    std::uint64_t cycles = bound > step ? (bound - step) / period : 0;
                    seen.clear();
                    if (cycles > 0) {
                        step += cycles * period;
                        weight += static_cast<double>(cycles) * cycle_weight;
                        continue;
                    }
                }
                seen[node] = {step, weight};
            } else {
                seen.clear();
                double u = unit_draw(rng) * (nd.segments.empty() ? nd.branches.back().cum : nd.seg_cum.back());
                bi = -1;
                for (std::size_t k = 0; k < nd.branches.size(); ++k)
                    if (u < nd.branches[k].cum) { bi = static_cast<int>(k); break; }
                if (bi < 0 && nd.segments.empty()) bi = static_cast<int>(nd.branches.size()) - 1;
                if (bi < 0) {
                    std::size_t k = 0;
                    while (k + 1 < nd.segments.size() && u >= nd.seg_cum[k]) ++k;
                    const DecisionSegment& s = nd.segments[k];
                    double lo = to_double(s.lo), hi = to_double(s.hi);
                    Rational delay(lo + (hi - lo) * unit_draw(rng));
                    EdgeResult r = apply_edge(g, nd.config, s.transition, delay);
                    weight += to_double(r.weight);
                    ++step;
                    node = cache.get(r.next, step);
                    continue;
                }
            }
            McBranch& b = cache.nodes[node].branches[bi];
            weight += b.weight;
            alts += b.alt ? 1 : 0;
            ++step;
            if (b.next < 0 || cache.phase(step) != cache.phase(step - 1)) {
                Config nc = b.next_config;
                int nx = cache.get(nc, step);
                if (cache.phase(step) == cache.phase(step - 1)) cache.nodes[node].branches[bi].next = nx;
                node = nx;
            } else {
                node = b.next;
            }
        }
        if (opt.keep_weights) {
            res.weights.push_back(weight);
            res.reached_flags.push_back(reached);
        }
        if (!reached) {
            ++res.cutoff;
            continue;
        }
        ++res.reached;
        double delta = weight - mean;
        mean += delta / static_cast<double>(res.reached);
        m2 += delta * (weight - mean);
        len_sum += static_cast<double>(step);
        int zone = (opt.zone_K > 0 && step > opt.zone_K) ? 1 : (alts == 0 ? 0 : 2);
        ++res.zones.count[zone];
        zone_weight[zone] += weight;
    }
    res.mean = mean;
    res.stddev = res.reached > 1 ? std::sqrt(m2 / static_cast<double>(res.reached - 1)) : 0.0;
    res.ci95 = res.reached > 0 ? 1.96 * res.stddev / std::sqrt(static_cast<double>(res.reached)) : 0.0;
    res.mean_length = res.reached > 0 ? len_sum / static_cast<double>(res.reached) : 0.0;
    for (int z = 0; z < 3; ++z) {
        res.zones.mass[z] = opt.runs ? static_cast<double>(res.zones.count[z]) / static_cast<double>(opt.runs) : 0.0;
        res.zones.gamma[z] = res.zones.count[z] ? zone_weight[z] / static_cast<double>(res.zones.count[z]) : 0.0;
    }
    return res;
}

}  // namespace wtg
