#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

namespace wtg {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact "p/q" rendering. Integers are written with a /1 denominator.
std::string to_pq(const Rational& r);

// Accepts "p/q", "p" or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);

// Twelve significant digits, for CSV and plots only.
std::string to_decimal(const Rational& r, int significant = 12);

double to_double(const Rational& r);

Rational floor_q(const Rational& r);
bool is_integer(const Rational& r);

// Approximate log10 of a positive rational that may be far outside double range.
double log10_q(const Rational& r);

// ── Extended rationals ───────────────────────────────────────────────

enum class ExtKind : std::uint8_t { NegInf, Finite, PosInf };

struct ExtRational {
    ExtKind kind = ExtKind::Finite;
    Rational value = 0;

    ExtRational() = default;
    ExtRational(Rational v) : kind(ExtKind::Finite), value(std::move(v)) {}  // NOLINT
    ExtRational(long v) : kind(ExtKind::Finite), value(v) {}                 // NOLINT
    ExtRational(int v) : kind(ExtKind::Finite), value(v) {}                  // NOLINT

    static ExtRational pos_inf() { ExtRational r; r.kind = ExtKind::PosInf; return r; }
    static ExtRational neg_inf() { ExtRational r; r.kind = ExtKind::NegInf; return r; }

    bool finite() const { return kind == ExtKind::Finite; }
    bool is_pos_inf() const { return kind == ExtKind::PosInf; }
    bool is_neg_inf() const { return kind == ExtKind::NegInf; }

    std::string str() const;  // "p/q", "+inf" or "-inf"
    static ExtRational parse(const std::string& s);
};

bool operator==(const ExtRational& a, const ExtRational& b);
std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);
// +inf + -inf never arises in this code base; it throws.
ExtRational operator+(const ExtRational& a, const ExtRational& b);
ExtRational operator-(const ExtRational& a);
const ExtRational& ext_min(const ExtRational& a, const ExtRational& b);
const ExtRational& ext_max(const ExtRational& a, const ExtRational& b);

}  // namespace wtg
