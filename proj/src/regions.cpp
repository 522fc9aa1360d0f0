#include "wtg/regions.hpp"
#include "wtg/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>

namespace wtg {

// ── Regions ──────────────────────────────────────────────────────────

bool Region::is_point(int clock) const {
    for (const auto& cls : fracs)
        if (std::find(cls.begin(), cls.end(), clock) != cls.end()) return false;
    return true;
}

bool Region::contains(const Valuation& v) const { return region_of(v) == *this; }

std::string Region::str(const std::vector<std::string>& names) const {
    auto name = [&](int i) { return i < static_cast<int>(names.size()) ? names[i] : "c" + std::to_string(i); };
    if (ints.size() == 1) {
        long c = ints[0];
        return is_point(0) ? "{" + std::to_string(c) + "}"
                           : "(" + std::to_string(c) + "," + std::to_string(c + 1) + ")";
    }
    std::string s;
    for (std::size_t i = 0; i < ints.size(); ++i) {
        if (i) s += " ";
        long c = ints[i];
        s += name(static_cast<int>(i)) + (is_point(static_cast<int>(i))
                                              ? "={" + std::to_string(c) + "}"
                                              : ":(" + std::to_string(c) + "," + std::to_string(c + 1) + ")");
    }
    if (!fracs.empty()) {
        s += " |";
        for (std::size_t k = 0; k < fracs.size(); ++k) {
            s += k ? "<" : " ";
            for (std::size_t j = 0; j < fracs[k].size(); ++j) s += (j ? "=" : "") + name(fracs[k][j]);
        }
    }
    return s;
}

Region region_of(const Valuation& v) {
    Region r;
    std::vector<std::pair<Rational, int>> nz;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0) throw Error("regions", "negative_clock", "valuation has a negative clock");
        Rational f = floor_q(v[i]);
        r.ints.push_back(f.get_num().get_si());
        Rational frac = v[i] - f;
        if (frac != 0) nz.emplace_back(frac, static_cast<int>(i));
    }
    std::sort(nz.begin(), nz.end());
    for (std::size_t i = 0; i < nz.size(); ++i) {
        if (i == 0 || nz[i].first != nz[i - 1].first) r.fracs.emplace_back();
        r.fracs.back().push_back(nz[i].second);
    }
    return r;
}

namespace {

void ordered_partitions(std::vector<int> rest, std::vector<std::vector<int>>& prefix,
                        std::vector<std::vector<std::vector<int>>>& out) {
    if (rest.empty()) { out.push_back(prefix); return; }
    const std::size_t n = rest.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> cls, remaining;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? cls : remaining).push_back(rest[i]);
        prefix.push_back(cls);
        ordered_partitions(remaining, prefix, out);
        prefix.pop_back();
    }
}

std::optional<Region> next_time_region(const Region& r, long M) {
    std::vector<int> zero;
    for (int i = 0; i < static_cast<int>(r.ints.size()); ++i)
        if (r.is_point(i)) zero.push_back(i);
    Region n = r;
    if (!zero.empty()) {
        for (int z : zero)
            if (r.ints[z] >= M) return std::nullopt;
        n.fracs.insert(n.fracs.begin(), zero);
        return n;
    }
    if (n.fracs.empty()) return std::nullopt;  // no clocks at all
    for (int c : n.fracs.back()) n.ints[c] += 1;
    n.fracs.pop_back();
    return n;
}

}  // namespace

std::vector<Region> all_regions(int clocks, long M) {
    std::vector<Region> out;
    std::vector<long> ints(clocks);
    std::vector<bool> nonzero(clocks);
    std::function<void(int)> rec = [&](int i) {
        if (i == clocks) {
            std::vector<int> nz;
            for (int c = 0; c < clocks; ++c)
                if (nonzero[c]) nz.push_back(c);
            std::vector<std::vector<std::vector<int>>> parts;
            std::vector<std::vector<int>> prefix;
            ordered_partitions(nz, prefix, parts);
            for (auto& p : parts) out.push_back(Region{ints, p});
            return;
        }
        for (long c = 0; c <= M; ++c) {
            ints[i] = c;
            nonzero[i] = false;
            rec(i + 1);
            if (c < M) { nonzero[i] = true; rec(i + 1); }
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Region> time_successors(const Region& r, long M) {
    std::vector<Region> out{r};
    while (auto n = next_time_region(out.back(), M)) out.push_back(*n);
    return out;
}

Region reset_region(const Region& r, const std::vector<int>& resets) {
    Region n = r;
    for (int c : resets) {
        n.ints[c] = 0;
        for (auto& cls : n.fracs) cls.erase(std::remove(cls.begin(), cls.end(), c), cls.end());
    }
    n.fracs.erase(std::remove_if(n.fracs.begin(), n.fracs.end(), [](const auto& c) { return c.empty(); }),
                  n.fracs.end());
    return n;
}

Valuation representative(const Region& r) {
    Valuation v(r.ints.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = r.ints[i];
    const long k = static_cast<long>(r.fracs.size());
    for (long j = 0; j < k; ++j)
        for (int c : r.fracs[j]) v[c] += Rational(j + 1, k + 1);
    return v;
}

bool region_satisfies(const Region& r, const Guard& g) { return g.satisfied(representative(r)); }

Valuation sample_valuation(const Region& r, std::mt19937_64& rng) {
    constexpr long D = 1L << 20;
    const std::size_t k = r.fracs.size();
    std::set<long> picks;
    std::uniform_int_distribution<long> dist(1, D - 1);
    while (picks.size() < k) picks.insert(dist(rng));
    Valuation v(r.ints.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = r.ints[i];
    std::size_t j = 0;
    for (long p : picks) {
        for (int c : r.fracs[j]) v[c] += Rational(p, D);
        ++j;
    }
    for (auto& x : v) x.canonicalize();
    return v;
}

std::vector<std::vector<long>> region_corners(const Region& r) {
    std::vector<std::vector<long>> out{r.ints};
    std::vector<long> cur = r.ints;
    for (auto it = r.fracs.rbegin(); it != r.fracs.rend(); ++it) {
        for (int c : *it) cur[c] += 1;
        out.push_back(cur);
    }
    return out;
}

Rational region_lo(const Region& r) { return Rational(r.ints.at(0)); }
Rational region_hi(const Region& r) { return Rational(r.ints.at(0) + (r.is_point(0) ? 0 : 1)); }

bool region_before(const Region& a, const Region& b) {
    auto idx = [](const Region& r) { return 2 * r.ints.at(0) + (r.is_point(0) ? 0 : 1); };
    return idx(a) < idx(b);
}

// ── Region game ──────────────────────────────────────────────────────

int RegionGame::find(int location, const Region& r) const {
    auto it = index.find({location, r});
    return it == index.end() ? -1 : it->second;
}

int RegionGame::state_of(const Config& c) const { return find(c.location, region_of(c.valuation)); }

std::string RegionGame::state_name(int s) const {
    return game.locations[states[s].location].name + "," + states[s].region.str(game.clocks);
}

std::vector<int> RegionGame::successors(int s) const {
    std::vector<int> out;
    for (int e : this->out[s]) out.push_back(edges[e].to);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void RegionGame::reindex() {
    index.clear();
    for (std::size_t i = 0; i < states.size(); ++i) index[{states[i].location, states[i].region}] = static_cast<int>(i);
    out.assign(states.size(), {});
    in.assign(states.size(), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        out[edges[e].from].push_back(static_cast<int>(e));
        in[edges[e].to].push_back(static_cast<int>(e));
    }
}

RegionGame build_region_game(const GameDef& g, const RegionGameOptions& opt) {
    const int n = g.clock_count();
    const long M = g.clock_bound;
    using Key = std::pair<int, Region>;

    auto moves = [&](const Key& k, const std::function<void(int, const Region&, const Key&)>& emit) {
        if (g.is_target(k.first)) return;
        for (int t : g.outgoing(k.first)) {
            const auto& tr = g.transitions[t];
            for (const auto& r2 : time_successors(k.second, M)) {
                if (!region_satisfies(r2, tr.guard)) continue;
                emit(t, r2, Key{tr.to, reset_region(r2, tr.resets)});
            }
        }
    };

    std::set<Key> keys;
    if (opt.reachable_only) {
        std::deque<Key> queue;
        Region zero{std::vector<long>(n, 0), {}};
        for (int l = 0; l < static_cast<int>(g.locations.size()); ++l)
            if (keys.insert({l, zero}).second) queue.push_back({l, zero});
        while (!queue.empty()) {
            Key k = queue.front();
            queue.pop_front();
            moves(k, [&](int, const Region&, const Key& nk) {
                if (keys.insert(nk).second) queue.push_back(nk);
            });
        }
    } else {
        auto regions = all_regions(n, M);
        for (int l = 0; l < static_cast<int>(g.locations.size()); ++l)
            for (const auto& r : regions) keys.insert({l, r});
    }

    RegionGame rg;
    rg.game = g;
    for (const auto& k : keys) rg.states.push_back(RegionState{k.first, k.second});
    rg.reindex();
    for (std::size_t s = 0; s < rg.states.size(); ++s) {
        Key k{rg.states[s].location, rg.states[s].region};
        moves(k, [&](int t, const Region& r2, const Key& nk) {
            int to = rg.find(nk.first, nk.second);
            if (to < 0) return;  // leaves the clock domain
            rg.edges.push_back(RegionEdge{static_cast<int>(s), t, r2, to});
        });
    }
    rg.reindex();
    return rg;
}

std::vector<bool> reachable_from(const RegionGame& rg, const std::vector<int>& sources) {
    std::vector<bool> seen(rg.size(), false);
    std::deque<int> q;
    for (int s : sources)
        if (!seen[s]) { seen[s] = true; q.push_back(s); }
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (int e : rg.out[s]) {
            int t = rg.edges[e].to;
            if (!seen[t]) { seen[t] = true; q.push_back(t); }
        }
    }
    return seen;
}

std::vector<int> zero_states(const RegionGame& rg) {
    std::vector<int> out;
    for (std::size_t s = 0; s < rg.size(); ++s) {
        const auto& r = rg.states[s].region;
        if (r.fracs.empty() && std::all_of(r.ints.begin(), r.ints.end(), [](long c) { return c == 0; }))
            out.push_back(static_cast<int>(s));
    }
    return out;
}

// ── SCCs ─────────────────────────────────────────────────────────────

SccInfo scc_decompose(const RegionGame& rg) {
    const int n = static_cast<int>(rg.size());
    std::vector<std::vector<int>> succ(n);
    for (int s = 0; s < n; ++s) succ[s] = rg.successors(s);

    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> found;  // reverse topological order
    int counter = 0;

    for (int root = 0; root < n; ++root) {
        if (idx[root] >= 0) continue;
        std::vector<std::pair<int, std::size_t>> work{{root, 0}};
        idx[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!work.empty()) {
            auto& [v, i] = work.back();
            if (i < succ[v].size()) {
                int w = succ[v][i++];
                if (idx[w] < 0) {
                    idx[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    work.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
                continue;
            }
            if (low[v] == idx[v]) {
                std::vector<int> members;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    members.push_back(w);
                } while (w != v);
                std::sort(members.begin(), members.end());
                found.push_back(members);
            }
            int done = v;
            work.pop_back();
            if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        }
    }

    // Ids follow the smallest member so they only depend on state order.
    std::vector<std::size_t> by_first(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) by_first[i] = i;
    std::sort(by_first.begin(), by_first.end(),
              [&](std::size_t a, std::size_t b) { return found[a].front() < found[b].front(); });
    std::vector<int> id_of_found(found.size());
    SccInfo info;
    info.scc_of.assign(n, -1);
    for (std::size_t k = 0; k < by_first.size(); ++k) {
        id_of_found[by_first[k]] = static_cast<int>(k);
        info.members.push_back(found[by_first[k]]);
        for (int s : found[by_first[k]]) info.scc_of[s] = static_cast<int>(k);
    }
    // Tarjan completes sinks first.
    for (std::size_t i = found.size(); i > 0; --i) info.topo_order.push_back(id_of_found[i - 1]);
    info.has_cycle.assign(info.members.size(), false);
    for (std::size_t c = 0; c < info.members.size(); ++c) {
        if (info.members[c].size() > 1) { info.has_cycle[c] = true; continue; }
        int s = info.members[c][0];
        for (int e : rg.out[s])
            if (rg.edges[e].to == s) info.has_cycle[c] = true;
    }
    return info;
}

// ── Corner points ────────────────────────────────────────────────────

namespace {

// Corner moves of a region edge: (corner of source closure, delay, corner after reset).
struct CornerMove {
    std::vector<long> from;
    long delay;
    std::vector<long> to;
};

std::vector<CornerMove> corner_moves(const RegionGame& rg, const RegionEdge& e) {
    std::vector<CornerMove> out;
    const auto& tr = rg.game.transitions[e.transition];
    auto src = region_corners(rg.states[e.from].region);
    auto mid = region_corners(e.guard_region);
    for (const auto& v : src) {
        for (const auto& w : mid) {
            long d = w.empty() ? 0 : w[0] - v[0];
            if (d < 0) continue;
            bool diagonal = true;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (w[i] - v[i] != d) diagonal = false;
            if (!diagonal) continue;
            std::vector<long> after = w;
            for (int c : tr.resets) after[c] = 0;
            out.push_back(CornerMove{v, d, after});
        }
    }
    return out;
}

long edge_corner_weight(const RegionGame& rg, const RegionEdge& e, long delay) {
    return delay * rg.game.locations[rg.states[e.from].location].rate + rg.game.transitions[e.transition].weight;
}

}  // namespace

CornerGraph build_corner_graph(const RegionGame& rg) {
    CornerGraph cg;
    std::map<CornerNode, int> node_index;
    for (std::size_t s = 0; s < rg.size(); ++s)
        for (auto& c : region_corners(rg.states[s].region)) {
            CornerNode n{static_cast<int>(s), c};
            node_index[n] = static_cast<int>(cg.nodes.size());
            cg.nodes.push_back(n);
        }
    for (std::size_t e = 0; e < rg.edges.size(); ++e) {
        const auto& re = rg.edges[e];
        for (const auto& m : corner_moves(rg, re)) {
            auto a = node_index.find(CornerNode{re.from, m.from});
            auto b = node_index.find(CornerNode{re.to, m.to});
            if (a == node_index.end() || b == node_index.end())
                throw Error("regions", "corner_mismatch", "corner outside region closure at " + rg.state_name(re.from));
            cg.edges.push_back(CornerEdge{a->second, b->second, static_cast<int>(e), m.delay,
                                          edge_corner_weight(rg, re, m.delay)});
        }
    }
    return cg;
}

CycleBounds cycle_weight_bounds(const RegionGame& rg, const std::vector<int>& states,
                                const std::vector<int>& transitions) {
    const std::size_t k = states.size();
    if (k == 0 || transitions.size() != k) throw Error("regions", "bad_cycle", "empty or malformed cycle");

    struct Cell {
        long lo = std::numeric_limits<long>::max();
        long hi = std::numeric_limits<long>::min();
        std::vector<long> lo_prev, hi_prev;
        long lo_delay = 0, hi_delay = 0;
    };
    using Layer = std::map<std::vector<long>, Cell>;
    std::vector<Layer> layers(k + 1);
    for (const auto& c : region_corners(rg.states[states[0]].region)) {
        Cell cell;
        cell.lo = cell.hi = 0;
        layers[0][c] = cell;
    }
    for (std::size_t i = 0; i < k; ++i) {
        int from = states[i], to = states[(i + 1) % k];
        bool any = false;
        for (int e : rg.out[from]) {
            const auto& re = rg.edges[e];
            if (re.transition != transitions[i] || re.to != to) continue;
            any = true;
            for (const auto& m : corner_moves(rg, re)) {
                auto it = layers[i].find(m.from);
                if (it == layers[i].end()) continue;
                long w = edge_corner_weight(rg, re, m.delay);
                Cell& nxt = layers[i + 1][m.to];
                if (it->second.lo + w < nxt.lo) { nxt.lo = it->second.lo + w; nxt.lo_prev = m.from; nxt.lo_delay = m.delay; }
                if (it->second.hi + w > nxt.hi) { nxt.hi = it->second.hi + w; nxt.hi_prev = m.from; nxt.hi_delay = m.delay; }
            }
        }
        if (!any)
            throw Error("regions", "bad_cycle", "no region transition " + rg.state_name(from) + " -> " + rg.state_name(to));
    }
    if (layers[k].empty()) throw Error("regions", "bad_cycle", "cycle admits no corner play");

    CycleBounds b;
    auto best_lo = layers[k].begin(), best_hi = layers[k].begin();
    for (auto it = layers[k].begin(); it != layers[k].end(); ++it) {
        if (it->second.lo < best_lo->second.lo) best_lo = it;
        if (it->second.hi > best_hi->second.hi) best_hi = it;
    }
    b.min_weight = best_lo->second.lo;
    b.max_weight = best_hi->second.hi;

    auto witness = [&](std::vector<long> corner, bool low) {
        CornerWitness w;
        std::vector<std::pair<int, Rational>> rev;
        for (std::size_t i = k; i > 0; --i) {
            const Cell& c = layers[i].at(corner);
            rev.emplace_back(transitions[i - 1], Rational(low ? c.lo_delay : c.hi_delay));
            corner = low ? c.lo_prev : c.hi_prev;
        }
        w.start.location = rg.states[states[0]].location;
        for (long v : corner) w.start.valuation.emplace_back(v);
        w.steps.assign(rev.rbegin(), rev.rend());
        w.weight = low ? b.min_weight : b.max_weight;
        return w;
    };
    b.min_witness = witness(best_lo->first, true);
    b.max_witness = witness(best_hi->first, false);
    return b;
}

std::vector<RegionCycle> enumerate_simple_cycles(const RegionGame& rg, const SccInfo& scc, std::size_t cap) {
    std::vector<RegionCycle> out;
    std::size_t total = 0;
    for (std::size_t c = 0; c < scc.members.size(); ++c) {
        if (!scc.has_cycle[c]) continue;
        const auto& mem = scc.members[c];
        const int n = static_cast<int>(mem.size());
        std::map<int, int> local;
        for (int i = 0; i < n; ++i) local[mem[i]] = i;
        std::vector<std::vector<int>> adj(n);
        // transitions between each ordered pair of local vertices
        std::map<std::pair<int, int>, std::vector<int>> via;
        for (int i = 0; i < n; ++i) {
            for (int e : rg.out[mem[i]]) {
                auto it = local.find(rg.edges[e].to);
                if (it == local.end()) continue;
                auto& ts = via[{i, it->second}];
                if (std::find(ts.begin(), ts.end(), rg.edges[e].transition) == ts.end())
                    ts.push_back(rg.edges[e].transition);
                if (std::find(adj[i].begin(), adj[i].end(), it->second) == adj[i].end()) adj[i].push_back(it->second);
            }
            std::sort(adj[i].begin(), adj[i].end());
        }
        for (auto& [_, ts] : via) std::sort(ts.begin(), ts.end());

        std::vector<RegionCycle> found;
        auto emit = [&](const std::vector<int>& cyc) {
            std::vector<std::size_t> choice(cyc.size(), 0);
            while (true) {
                RegionCycle rc;
                rc.scc = static_cast<int>(c);
                for (std::size_t i = 0; i < cyc.size(); ++i) {
                    rc.states.push_back(mem[cyc[i]]);
                    rc.transitions.push_back(via[{cyc[i], cyc[(i + 1) % cyc.size()]}][choice[i]]);
                }
                if (++total > cap)
                    throw Error("regions", "cycle_overflow",
                                "SCC " + std::to_string(c) + " exceeds the cap of " + std::to_string(cap) + " simple cycles");
                found.push_back(std::move(rc));
                std::size_t i = 0;
                for (; i < cyc.size(); ++i) {
                    if (++choice[i] < via[{cyc[i], cyc[(i + 1) % cyc.size()]}].size()) break;
                    choice[i] = 0;
                }
                if (i == cyc.size()) break;
            }
        };

        for (int s = 0; s < n; ++s) {
            std::vector<bool> blocked(n, false);
            std::vector<std::set<int>> B(n);
            std::vector<int> stack;
            std::function<void(int)> unblock = [&](int u) {
                blocked[u] = false;
                auto bs = std::move(B[u]);
                B[u].clear();
                for (int w : bs)
                    if (blocked[w]) unblock(w);
            };
            std::function<bool(int)> circuit = [&](int v) {
                bool f = false;
                stack.push_back(v);
                blocked[v] = true;
                for (int w : adj[v]) {
                    if (w < s) continue;
                    if (w == s) { emit(stack); f = true; }
                    else if (!blocked[w] && circuit(w)) f = true;
                }
                if (f) unblock(v);
                else
                    for (int w : adj[v])
                        if (w >= s) B[w].insert(v);
                stack.pop_back();
                return f;
            };
            circuit(s);
        }
        for (auto& rc : found) {
            auto b = cycle_weight_bounds(rg, rc.states, rc.transitions);
            rc.min_weight = b.min_weight;
            rc.max_weight = b.max_weight;
            out.push_back(std::move(rc));
        }
    }
    return out;
}

}  // namespace wtg
