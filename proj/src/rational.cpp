#include "wtg/rational.hpp"
#include "wtg/error.hpp"

#include <cmath>
#include <cstdio>

namespace wtg {

std::string to_pq(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error("parse", "bad_rational", "cannot read rational '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash), 10);
            BigInt den(text.substr(slash + 1), 10);
            if (den == 0) throw bad();
            Rational r(num, den);
            r.canonicalize();
            return r;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(BigInt(text, 10));
        std::string sign;
        std::string body = text;
        if (body[0] == '-' || body[0] == '+') {
            if (body[0] == '-') sign = "-";
            body = body.substr(1);
            dot -= 1;
        }
        std::string int_part = body.substr(0, dot);
        std::string frac = body.substr(dot + 1);
        if (int_part.empty()) int_part = "0";
        if (frac.empty()) throw bad();
        for (char c : int_part + frac)
            if (c < '0' || c > '9') throw bad();
        BigInt den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        Rational r(BigInt(sign + int_part + frac, 10), den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal(const Rational& r, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, r.get_d());
    return buf;
}

Rational floor_q(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

double log10_q(const Rational& r) {
    if (r <= 0) throw Error("numeric", "domain", "log10 of a non-positive rational");
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
    return std::log10(mn / md) + static_cast<double>(en - ed) * std::log10(2.0);
}

// ── Extended rationals ───────────────────────────────────────────────

std::string ExtRational::str() const {
    switch (kind) {
        case ExtKind::PosInf: return "+inf";
        case ExtKind::NegInf: return "-inf";
        default: return to_pq(value);
    }
}

ExtRational ExtRational::parse(const std::string& s) {
    if (s == "+inf" || s == "inf") return pos_inf();
    if (s == "-inf") return neg_inf();
    return ExtRational(parse_rational(s));
}

bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.kind != b.kind) return false;
    return a.kind != ExtKind::Finite || a.value == b.value;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
    if (a.kind != ExtKind::Finite) return std::strong_ordering::equal;
    int c = cmp(a.value, b.value);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.finite() && b.finite()) return ExtRational(Rational(a.value + b.value));
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
        throw Error("numeric", "indeterminate", "+inf + -inf");
    return a.finite() ? b : a;
}

ExtRational operator-(const ExtRational& a) {
    if (a.is_pos_inf()) return ExtRational::neg_inf();
    if (a.is_neg_inf()) return ExtRational::pos_inf();
    return ExtRational(Rational(-a.value));
}

const ExtRational& ext_min(const ExtRational& a, const ExtRational& b) { return (b < a) ? b : a; }
const ExtRational& ext_max(const ExtRational& a, const ExtRational& b) { return (a < b) ? b : a; }

}  // namespace wtg
