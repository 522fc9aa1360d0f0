#include "wtg/values.hpp"
#include "wtg/error.hpp"

#include <algorithm>
#include <set>

namespace wtg {

void require_one_clock(const GameDef& g, const char* stage) {
    if (g.clock_count() != 1)
        throw Error(stage, "multi_clock", "exact values are available for one-clock games only (game has " +
                                              std::to_string(g.clock_count()) + " clocks)");
}

namespace {

Region point_region(long c) { return Region{{c}, {}}; }
Region open_region(long c) { return Region{{c}, {{0}}}; }

// Per location: a value on each integer point and a function on each unit interval.
struct Parts {
    std::vector<ExtRational> points;
    std::vector<PAFunction> opens;
};

Parts split(const PAFunction& f, long M) {
    Parts p;
    for (long c = 0; c <= M; ++c) p.points.push_back(f.eval(c));
    for (long c = 0; c < M; ++c) p.opens.push_back(f.slice(c, c + 1));
    return p;
}

PAFunction assemble(const Parts& p, long M) {
    PAFunction f;
    if (M == 0) return PAFunction::constant(0, 0, p.points[0]);
    for (long c = 0; c < M; ++c) {
        const PAFunction& g = p.opens[c];
        f.knots.emplace_back(c);
        f.values.push_back(p.points[c]);
        for (std::size_t i = 0; i < g.pieces.size(); ++i) {
            if (i > 0) {
                f.knots.push_back(g.knots[i]);
                f.values.push_back(g.values[i]);
            }
            f.pieces.push_back(g.pieces[i]);
        }
    }
    f.knots.emplace_back(M);
    f.values.push_back(p.points[M]);
    return f;
}

bool is_integer_knot(const Rational& x) { return is_integer(x); }

// Best outcome of one region edge, seen from its source region.
struct EdgeOutcome {
    bool constant = true;
    ExtRational value;  // when constant: ext over the reachable delays, before the -rate*nu + w shift
    PAFunction fn;      // otherwise, on the closure of the (open) source region
};

EdgeOutcome edge_outcome(const RegionGame& rg, const PAValue& v, const RegionEdge& e, bool maximize) {
    const GameDef& g = rg.game;
    const auto& tr = g.transitions[e.transition];
    const long rate = g.locations[rg.states[e.from].location].rate;
    const int dest = rg.states[e.to].location;
    const bool reset = !tr.resets.empty();
    const Region& src = rg.states[e.from].region;
    const Region& mid = e.guard_region;
    EdgeOutcome out;
    if (mid.is_point(0)) {
        Rational d = region_lo(mid);
        out.value = (reset ? v.loc[dest].eval(0) : v.loc[dest].eval(d)) + ExtRational(Rational(d * rate));
        return out;
    }
    Rational d = region_lo(mid);
    PAFunction h = reset ? PAFunction::constant(d, d + 1, v.loc[dest].eval(0)) : v.loc[dest].slice(d, d + 1);
    h = h.plus_affine(rate, 0);
    if (maximize) h = h.negated();
    if (mid == src) {
        out.constant = false;
        out.fn = suffix_inf(h);
        if (maximize) out.fn = out.fn.negated();
    } else {
        out.value = open_inf(h);
        if (maximize) out.value = -out.value;
    }
    return out;
}

// Combines edge outcomes of one source region state into its new value.
struct RegionAccumulator {
    bool maximize = false;
    bool any = false;
    bool is_point = true;
    Rational lo;
    ExtRational point_value;
    PAFunction fn;

    void add(const EdgeOutcome& o, long rate, long weight) {
        if (is_point) {
            ExtRational val = o.constant ? o.value : o.fn.eval(lo);
            val = val + ExtRational(Rational(-rate * lo + weight));
            point_value = !any ? val : (maximize ? ext_max(point_value, val) : ext_min(point_value, val));
        } else {
            PAFunction f = o.constant ? PAFunction::constant(lo, lo + 1, o.value) : o.fn;
            f = f.plus_affine(-rate, weight);
            fn = !any ? f : (maximize ? pa_max(fn, f) : pa_min(fn, f));
        }
        any = true;
    }
};

}  // namespace

std::string Cell::str() const {
    return point() ? "{" + to_pq(lo) + "}" : "(" + to_pq(lo) + "," + to_pq(hi) + ")";
}

PAValue initial_value(const RegionGame& full, const ValueClassification& cls) {
    const GameDef& g = full.game;
    require_one_clock(g, "values");
    const long M = g.clock_bound;
    PAValue v;
    v.clock_bound = M;
    for (int l = 0; l < static_cast<int>(g.locations.size()); ++l) {
        Parts p;
        auto start = [&](const Region& r) -> ExtRational {
            if (g.is_target(l)) return ExtRational(0);
            int s = full.find(l, r);
            if (s >= 0 && cls.cls[s] == ValueClass::MinusInfinity) return ExtRational::neg_inf();
            return ExtRational::pos_inf();
        };
        for (long c = 0; c <= M; ++c) p.points.push_back(start(point_region(c)));
        for (long c = 0; c < M; ++c) p.opens.push_back(PAFunction::constant(c, c + 1, start(open_region(c))));
        PAFunction f = assemble(p, M);
        f.simplify(is_integer_knot);
        v.loc.push_back(f);
    }
    return v;
}

PAValue apply_F(const RegionGame& rg, const PAValue& v) {
    const GameDef& g = rg.game;
    require_one_clock(g, "values");
    const long M = g.clock_bound;
    PAValue next = v;
    for (int l = 0; l < static_cast<int>(g.locations.size()); ++l) {
        if (g.is_target(l)) continue;
        const bool maximize = g.locations[l].owner == Owner::Max;
        const long rate = g.locations[l].rate;
        Parts parts = split(v.loc[l], M);
        auto update = [&](const Region& r, bool point, long c) {
            int s = rg.find(l, r);
            if (s < 0) return;
            RegionAccumulator acc;
            acc.maximize = maximize;
            acc.is_point = point;
            acc.lo = c;
            for (int e : rg.out[s]) {
                const auto& re = rg.edges[e];
                acc.add(edge_outcome(rg, v, re, maximize), rate, g.transitions[re.transition].weight);
            }
            if (!acc.any) throw Error("values", "deadlock", "no move from " + rg.state_name(s));
            if (point) parts.points[c] = acc.point_value;
            else parts.opens[c] = acc.fn;
        };
        for (long c = 0; c <= M; ++c) update(point_region(c), true, c);
        for (long c = 0; c < M; ++c) update(open_region(c), false, c);
        PAFunction f = assemble(parts, M);
        f.simplify(is_integer_knot);
        next.loc[l] = std::move(f);
    }
    return next;
}

PAFunction transition_cost(const RegionGame& rg, const PAValue& v, int transition) {
    const GameDef& g = rg.game;
    require_one_clock(g, "values");
    const long M = g.clock_bound;
    const auto& tr = g.transitions.at(transition);
    const int l = tr.from;
    const bool maximize = g.locations[l].owner == Owner::Max;
    const ExtRational absent = maximize ? ExtRational::neg_inf() : ExtRational::pos_inf();
    Parts parts;
    for (long c = 0; c <= M; ++c) parts.points.push_back(absent);
    for (long c = 0; c < M; ++c) parts.opens.push_back(PAFunction::constant(c, c + 1, absent));
    auto update = [&](const Region& r, bool point, long c) {
        int s = rg.find(l, r);
        if (s < 0) return;
        RegionAccumulator acc;
        acc.maximize = maximize;
        acc.is_point = point;
        acc.lo = c;
        for (int e : rg.out[s])
            if (rg.edges[e].transition == transition)
                acc.add(edge_outcome(rg, v, rg.edges[e], maximize), g.locations[l].rate, tr.weight);
        if (!acc.any) return;
        if (point) parts.points[c] = acc.point_value;
        else parts.opens[c] = acc.fn;
    };
    for (long c = 0; c <= M; ++c) update(point_region(c), true, c);
    for (long c = 0; c < M; ++c) update(open_region(c), false, c);
    PAFunction f = assemble(parts, M);
    f.simplify();
    return f;
}

std::size_t default_max_iters(const RegionGame& pruned) {
    return 4 * pruned.size() * static_cast<std::size_t>(pruned.game.weight_bounds().w_edge_max + 1);
}

ValueIterationResult value_iterate(const RegionGame& pruned, const PAValue& v0, std::optional<std::size_t> max_iters) {
    require_one_clock(pruned.game, "values");
    ValueIterationResult res;
    res.max_iters = max_iters.value_or(default_max_iters(pruned));
    PAValue cur = v0;
    for (std::size_t i = 1; i <= res.max_iters; ++i) {
        PAValue nxt = apply_F(pruned, cur);
        if (nxt == cur) {
            res.converged = true;
            res.iterations = i;
            res.last_gap = ExtRational(0);
            res.value = std::move(cur);
            return res;
        }
        if (i == res.max_iters) {
            ExtRational gap(0);
            for (std::size_t l = 0; l < cur.loc.size(); ++l) gap = ext_max(gap, sup_distance(cur.loc[l], nxt.loc[l]));
            res.last_gap = gap;
            res.iterations = i;
            res.value = std::move(nxt);
            return res;
        }
        cur = std::move(nxt);
    }
    res.value = std::move(cur);
    return res;
}

int CellDecomposition::cell_of(const Rational& x) const {
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    if (it == knots.end() || x < knots.front())
        throw Error("values", "out_of_domain", "clock value " + to_pq(x) + " outside the cells");
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    if (*it == x) return static_cast<int>(2 * k);
    return static_cast<int>(2 * k - 1);
}

CellDecomposition extract_cells(const PAValue& v) {
    CellDecomposition cd;
    std::set<Rational> all;
    for (long c = 0; c <= v.clock_bound; ++c) all.insert(Rational(c));
    for (const auto& f : v.loc) {
        PAFunction merged = f;
        merged.simplify();
        cd.breakpoints.push_back(merged.knots);
        for (const auto& k : f.knots) all.insert(k);
    }
    cd.knots.assign(all.begin(), all.end());
    for (std::size_t i = 0; i < cd.knots.size(); ++i) {
        cd.cells.push_back(Cell{cd.knots[i], cd.knots[i]});
        if (i + 1 < cd.knots.size()) cd.cells.push_back(Cell{cd.knots[i], cd.knots[i + 1]});
    }
    cd.alpha_cells = cd.cells.size();
    return cd;
}

}  // namespace wtg
