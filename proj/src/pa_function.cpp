#include "wtg/pa_function.hpp"
#include "wtg/error.hpp"

#include <algorithm>

namespace wtg {

Piece Piece::constant(const ExtRational& v) {
    if (v.finite()) return finite(0, v.value);
    return Piece{v.kind, Affine{}};
}

ExtRational Piece::at(const Rational& x) const {
    if (kind == ExtKind::Finite) return ExtRational(f.at(x));
    return kind == ExtKind::PosInf ? ExtRational::pos_inf() : ExtRational::neg_inf();
}

namespace {

Piece negate(const Piece& p) {
    if (p.kind == ExtKind::PosInf) return Piece{ExtKind::NegInf, {}};
    if (p.kind == ExtKind::NegInf) return Piece{ExtKind::PosInf, {}};
    return Piece::finite(-p.f.slope, -p.f.intercept);
}

std::vector<Rational> merged_knots(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_same_domain(const PAFunction& a, const PAFunction& b) {
    if (a.lo() != b.lo() || a.hi() != b.hi())
        throw Error("values", "domain_mismatch", "piecewise-affine operands on different domains");
}

}  // namespace

PAFunction PAFunction::constant(const Rational& lo, const Rational& hi, const ExtRational& v) {
    PAFunction f;
    f.knots.push_back(lo);
    f.values.push_back(v);
    if (hi != lo) {
        f.knots.push_back(hi);
        f.values.push_back(v);
        f.pieces.push_back(Piece::constant(v));
    }
    return f;
}

PAFunction PAFunction::affine(const Rational& lo, const Rational& hi, const Rational& slope, const Rational& intercept) {
    PAFunction f;
    Affine a{slope, intercept};
    f.knots.push_back(lo);
    f.values.emplace_back(a.at(lo));
    if (hi != lo) {
        f.knots.push_back(hi);
        f.values.emplace_back(a.at(hi));
        f.pieces.push_back(Piece{ExtKind::Finite, a});
    }
    return f;
}

int PAFunction::knot_index(const Rational& x) const {
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    if (it != knots.end() && *it == x) return static_cast<int>(it - knots.begin());
    return -1;
}

int PAFunction::piece_index(const Rational& x) const {
    if (x < lo() || x > hi()) throw Error("values", "out_of_domain", "point " + to_pq(x) + " outside [" + to_pq(lo()) + "," + to_pq(hi()) + "]");
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    if (*it == x) return -1;
    return static_cast<int>(it - knots.begin()) - 1;
}

ExtRational PAFunction::eval(const Rational& x) const {
    int k = knot_index(x);
    if (k >= 0) return values[k];
    return pieces[piece_index(x)].at(x);
}

ExtRational PAFunction::left_limit(const Rational& x) const {
    if (x <= lo() || x > hi()) throw Error("values", "out_of_domain", "no left limit at " + to_pq(x));
    auto it = std::lower_bound(knots.begin(), knots.end(), x);
    return pieces[static_cast<std::size_t>(it - knots.begin()) - 1].at(x);
}

ExtRational PAFunction::right_limit(const Rational& x) const {
    if (x < lo() || x >= hi()) throw Error("values", "out_of_domain", "no right limit at " + to_pq(x));
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    return pieces[static_cast<std::size_t>(it - knots.begin()) - 1].at(x);
}

PAFunction PAFunction::refined(const std::vector<Rational>& points) const {
    std::vector<Rational> pts;
    for (const auto& p : points)
        if (p >= lo() && p <= hi()) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    auto all = merged_knots(knots, pts);
    PAFunction f;
    f.knots = all;
    for (const auto& k : all) f.values.push_back(eval(k));
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        Rational mid = (all[i] + all[i + 1]) / 2;
        f.pieces.push_back(pieces[piece_index(mid)]);
    }
    return f;
}

PAFunction PAFunction::slice(const Rational& a, const Rational& b) const {
    if (a < lo() || b > hi() || b < a) throw Error("values", "out_of_domain", "bad slice");
    PAFunction r = refined({a, b});
    PAFunction f;
    for (std::size_t i = 0; i < r.knots.size(); ++i) {
        if (r.knots[i] < a || r.knots[i] > b) continue;
        f.knots.push_back(r.knots[i]);
        f.values.push_back(r.values[i]);
        if (r.knots[i] < b) f.pieces.push_back(r.pieces[i]);
    }
    return f;
}

void PAFunction::simplify(const std::function<bool(const Rational&)>& keep) {
    PAFunction f;
    f.knots.push_back(knots[0]);
    f.values.push_back(values[0]);
    if (knots.size() > 1) f.pieces.push_back(pieces[0]);
    for (std::size_t i = 1; i < knots.size(); ++i) {
        bool interior = i + 1 < knots.size();
        if (interior && pieces[i] == pieces[i - 1] && values[i] == pieces[i].at(knots[i]) &&
            !(keep && keep(knots[i])))
            continue;
        f.knots.push_back(knots[i]);
        f.values.push_back(values[i]);
        if (interior) f.pieces.push_back(pieces[i]);
    }
    *this = std::move(f);
}

PAFunction PAFunction::negated() const {
    PAFunction f = *this;
    for (auto& v : f.values) v = -v;
    for (auto& p : f.pieces) p = negate(p);
    return f;
}

PAFunction PAFunction::plus_affine(const Rational& slope, const Rational& intercept) const {
    PAFunction f = *this;
    for (std::size_t i = 0; i < f.knots.size(); ++i)
        f.values[i] = f.values[i] + ExtRational(Rational(slope * f.knots[i] + intercept));
    for (auto& p : f.pieces)
        if (p.kind == ExtKind::Finite) { p.f.slope += slope; p.f.intercept += intercept; }
    return f;
}

std::string PAFunction::str() const {
    std::string s;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        s += "[" + to_pq(knots[i]) + ":" + values[i].str() + "]";
        if (i < pieces.size()) {
            const auto& p = pieces[i];
            s += p.kind == ExtKind::Finite ? " " + to_pq(p.f.slope) + "x+" + to_pq(p.f.intercept) + " "
                                           : (p.kind == ExtKind::PosInf ? " +inf " : " -inf ");
        }
    }
    return s;
}

// ── Envelopes ────────────────────────────────────────────────────────

namespace {

PAFunction pa_extremum(const PAFunction& a, const PAFunction& b, bool take_min) {
    require_same_domain(a, b);
    auto base = merged_knots(a.knots, b.knots);
    std::vector<Rational> all;
    for (std::size_t i = 0; i < base.size(); ++i) {
        all.push_back(base[i]);
        if (i + 1 == base.size()) break;
        Rational mid = (base[i] + base[i + 1]) / 2;
        const Piece& pa = a.pieces[a.piece_index(mid)];
        const Piece& pb = b.pieces[b.piece_index(mid)];
        if (pa.kind == ExtKind::Finite && pb.kind == ExtKind::Finite && pa.f.slope != pb.f.slope) {
            Rational x = (pb.f.intercept - pa.f.intercept) / (pa.f.slope - pb.f.slope);
            if (x > base[i] && x < base[i + 1]) all.push_back(x);
        }
    }
    PAFunction f;
    f.knots = all;
    for (const auto& k : all) {
        ExtRational va = a.eval(k), vb = b.eval(k);
        f.values.push_back(take_min ? ext_min(va, vb) : ext_max(va, vb));
    }
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        Rational mid = (all[i] + all[i + 1]) / 2;
        const Piece& pa = a.pieces[a.piece_index(mid)];
        const Piece& pb = b.pieces[b.piece_index(mid)];
        ExtRational va = pa.at(mid), vb = pb.at(mid);
        bool pick_a = take_min ? !(vb < va) : !(va < vb);
        f.pieces.push_back(pick_a ? pa : pb);
    }
    return f;
}

}  // namespace

PAFunction pa_min(const PAFunction& a, const PAFunction& b) { return pa_extremum(a, b, true); }
PAFunction pa_max(const PAFunction& a, const PAFunction& b) { return pa_extremum(a, b, false); }

bool pa_leq(const PAFunction& a, const PAFunction& b) {
    require_same_domain(a, b);
    auto all = merged_knots(a.knots, b.knots);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (b.eval(all[i]) < a.eval(all[i])) return false;
        if (i + 1 == all.size()) break;
        const Rational &x0 = all[i], &x1 = all[i + 1];
        if (b.right_limit(x0) < a.right_limit(x0)) return false;
        if (b.left_limit(x1) < a.left_limit(x1)) return false;
    }
    return true;
}

ExtRational open_inf(const PAFunction& f) {
    ExtRational best = ExtRational::pos_inf();
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
        best = ext_min(best, f.pieces[i].at(f.knots[i]));
        best = ext_min(best, f.pieces[i].at(f.knots[i + 1]));
        if (i > 0) best = ext_min(best, f.values[i]);
    }
    if (f.pieces.empty()) best = f.values[0];
    return best;
}

PAFunction suffix_inf(const PAFunction& f) {
    const std::size_t n = f.knots.size();
    if (n < 2) return f;
    std::vector<Rational> knots_rev;     // knots from right to left
    std::vector<ExtRational> values_rev;
    std::vector<Piece> pieces_rev;
    ExtRational right = ExtRational::pos_inf();  // inf over [knots[i+1], hi)
    knots_rev.push_back(f.knots[n - 1]);
    values_rev.push_back(f.pieces[n - 2].at(f.knots[n - 1]));
    for (std::size_t i = n - 1; i-- > 0;) {
        const Piece& p = f.pieces[i];
        const Rational &lo = f.knots[i], &hi = f.knots[i + 1];
        ExtRational piece_inf;  // inf over the open piece
        if (p.kind == ExtKind::Finite && p.f.slope > 0) {
            ExtRational at_hi(p.f.at(hi));
            piece_inf = ExtRational(p.f.at(lo));
            if (right.is_pos_inf() || !(right < at_hi)) {
                pieces_rev.push_back(p);
            } else if (right.is_neg_inf()) {
                pieces_rev.push_back(Piece::constant(right));
            } else {
                Rational x = (right.value - p.f.intercept) / p.f.slope;
                if (x <= lo) {
                    pieces_rev.push_back(Piece::constant(right));
                } else {
                    pieces_rev.push_back(Piece::constant(right));
                    knots_rev.push_back(x);
                    values_rev.push_back(right);
                    pieces_rev.push_back(p);
                }
            }
        } else {
            piece_inf = p.kind == ExtKind::Finite ? ExtRational(p.f.at(hi)) : p.at(hi);
            pieces_rev.push_back(Piece::constant(ext_min(piece_inf, right)));
        }
        right = ext_min(ext_min(right, piece_inf), f.values[i]);
        knots_rev.push_back(lo);
        values_rev.push_back(right);
    }
    PAFunction s;
    s.knots.assign(knots_rev.rbegin(), knots_rev.rend());
    s.values.assign(values_rev.rbegin(), values_rev.rend());
    s.pieces.assign(pieces_rev.rbegin(), pieces_rev.rend());
    return s;
}

ExtRational sup_distance(const PAFunction& a, const PAFunction& b) {
    require_same_domain(a, b);
    auto all = merged_knots(a.knots, b.knots);
    ExtRational best(0);
    auto diff = [&](const ExtRational& x, const ExtRational& y) -> ExtRational {
        if (x.finite() && y.finite()) return ExtRational(Rational(abs(x.value - y.value)));
        if (x == y) return ExtRational(0);
        return ExtRational::pos_inf();
    };
    for (std::size_t i = 0; i < all.size(); ++i) {
        best = ext_max(best, diff(a.eval(all[i]), b.eval(all[i])));
        if (i + 1 == all.size()) break;
        best = ext_max(best, diff(a.right_limit(all[i]), b.right_limit(all[i])));
        best = ext_max(best, diff(a.left_limit(all[i + 1]), b.left_limit(all[i + 1])));
    }
    return best;
}

PAFunction pa_envelope(const std::vector<PieceSpec>& specs, Envelope mode) {
    if (specs.empty()) throw Error("values", "empty_envelope", "no pieces");
    Rational lo = specs[0].lo, hi = specs[0].hi;
    for (const auto& s : specs) {
        if (s.hi < s.lo) throw Error("values", "bad_piece", "piece with hi < lo");
        lo = std::min(lo, s.lo);
        hi = std::max(hi, s.hi);
    }
    const ExtRational absent = mode == Envelope::Min ? ExtRational::pos_inf() : ExtRational::neg_inf();
    PAFunction acc = PAFunction::constant(lo, hi, absent);
    for (const auto& s : specs) {
        PAFunction f = PAFunction::constant(lo, hi, absent).refined({s.lo, s.hi});
        Affine a{s.slope, s.intercept};
        for (std::size_t i = 0; i < f.knots.size(); ++i) {
            const Rational& k = f.knots[i];
            bool inside = (k > s.lo || (k == s.lo && s.lo_closed)) && (k < s.hi || (k == s.hi && s.hi_closed));
            if (inside) f.values[i] = ExtRational(a.at(k));
            if (i + 1 < f.knots.size() && f.knots[i] >= s.lo && f.knots[i + 1] <= s.hi)
                f.pieces[i] = Piece{ExtKind::Finite, a};
        }
        acc = mode == Envelope::Min ? pa_min(acc, f) : pa_max(acc, f);
    }
    acc.simplify();
    return acc;
}

}  // namespace wtg
