#pragma once

#include "wtg/rational.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wtg {

struct Affine {
    Rational slope = 0;
    Rational intercept = 0;
    Rational at(const Rational& x) const { return slope * x + intercept; }
    bool operator==(const Affine&) const = default;
};

// An affine map, or a constant +inf / -inf.
struct Piece {
    ExtKind kind = ExtKind::Finite;
    Affine f;

    static Piece finite(Rational slope, Rational intercept) { return Piece{ExtKind::Finite, Affine{std::move(slope), std::move(intercept)}}; }
    static Piece constant(const ExtRational& v);
    ExtRational at(const Rational& x) const;
    bool operator==(const Piece&) const = default;
};

// A function on [knots.front(), knots.back()] that is affine on each open
// interval between consecutive knots and takes explicit values on the knots,
// so jumps at knots are represented exactly.
class PAFunction {
public:
    std::vector<Rational> knots;
    std::vector<ExtRational> values;  // one per knot
    std::vector<Piece> pieces;        // pieces[i] lives on (knots[i], knots[i+1])

    static PAFunction constant(const Rational& lo, const Rational& hi, const ExtRational& v);
    static PAFunction affine(const Rational& lo, const Rational& hi, const Rational& slope, const Rational& intercept);

    const Rational& lo() const { return knots.front(); }
    const Rational& hi() const { return knots.back(); }

    ExtRational eval(const Rational& x) const;
    ExtRational left_limit(const Rational& x) const;   // x > lo
    ExtRational right_limit(const Rational& x) const;  // x < hi
    // Index of the knot equal to x, or -1.
    int knot_index(const Rational& x) const;
    // Index i of the open piece (knots[i], knots[i+1]) containing x, or -1 on a knot.
    int piece_index(const Rational& x) const;

    PAFunction refined(const std::vector<Rational>& points) const;
    PAFunction slice(const Rational& a, const Rational& b) const;
    // Drops redundant knots; protected knots are kept.
    void simplify(const std::function<bool(const Rational&)>& keep = {});

    PAFunction negated() const;
    PAFunction plus_affine(const Rational& slope, const Rational& intercept) const;

    bool operator==(const PAFunction&) const = default;
    std::string str() const;
};

PAFunction pa_min(const PAFunction& a, const PAFunction& b);
PAFunction pa_max(const PAFunction& a, const PAFunction& b);
bool pa_leq(const PAFunction& a, const PAFunction& b);  // pointwise, including one-sided limits

// inf over the open interval (lo, hi) of f, one-sided limits included.
ExtRational open_inf(const PAFunction& f);
// For x in the open domain: inf over u in [x, hi) of f(u).
PAFunction suffix_inf(const PAFunction& f);

// Largest |a - b| over the common domain (+inf when an infinite part differs).
ExtRational sup_distance(const PAFunction& a, const PAFunction& b);

enum class Envelope { Min, Max };

struct PieceSpec {
    Rational lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;
    Rational slope = 0;
    Rational intercept = 0;
};

// Pointwise min (or max) of affine pieces over the hull of their domains;
// points covered by no piece get +inf (min) or -inf (max).
PAFunction pa_envelope(const std::vector<PieceSpec>& pieces, Envelope mode);

}  // namespace wtg
