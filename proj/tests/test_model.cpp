#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

#include "wtg/error.hpp"

using namespace wtg;
using namespace wtg::testing;

// ── Rationals ────────────────────────────────────────────────────────

TEST_CASE("rationals print in lowest terms and parse back") {
    CHECK(to_pq(Rational(3, 2)) == "3/2");
    CHECK(to_pq(Rational(-2)) == "-2/1");
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-7") == Rational(-7));
    for (long n = -20; n <= 20; ++n)
        for (long d = 1; d <= 9; ++d) {
            Rational q(n, d);
            q.canonicalize();
            CHECK(parse_rational(to_pq(q)) == q);
        }
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("extended rationals order infinities around the finite values") {
    ExtRational lo = ExtRational::neg_inf(), hi = ExtRational::pos_inf();
    CHECK(lo < ExtRational(-1000000));
    CHECK(ExtRational(1000000) < hi);
    CHECK((hi + ExtRational(3)).is_pos_inf());
    CHECK((-hi).is_neg_inf());
    CHECK(ExtRational::parse(hi.str()) == hi);
    CHECK(ExtRational::parse("5/3") == ExtRational(Rational(5, 3)));
}

TEST_CASE("decimals keep twelve significant digits") {
    CHECK(to_decimal(Rational(1, 3)) == "0.333333333333");
    CHECK(to_decimal(Rational(-5, 2)) == "-2.5");
}

// ── Game files ───────────────────────────────────────────────────────

TEST_CASE("game files round-trip") {
    for (const char* f : {"mixed_signs.json", "divergent_series.json", "neg_escape.json", "neg_timed.json"}) {
        GameDef g = load_fixture(f);
        CHECK(parse_game(serialize_game(g)) == g);
    }
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GameDef g = draw_game(seed);
        CHECK(parse_game(serialize_game(g)) == g);
    }
}

TEST_CASE("malformed games are rejected with the parse stage") {
    auto stage_of = [](const std::string& text) {
        try {
            parse_game(text);
        } catch (const Error& e) {
            return e.stage() + "/" + e.kind();
        }
        return std::string("accepted");
    };
    CHECK(stage_of("{").rfind("parse/", 0) == 0);
    CHECK(stage_of(R"({"clocks":["x"],"clock_bound":1,"locations":[{"name":"a","owner":"min","rate":0}],
        "transitions":[{"from":"a","to":"zz","guard":[],"reset":[],"weight":0}]})")
              .rfind("parse/", 0) == 0);
}

TEST_CASE("validation finds deadlocks") {
    // b is entered with x >= 1 but its only transition needs x <= 0.
    GameDef g = parse_game(R"({"clocks":["x"],"clock_bound":2,
        "locations":[{"name":"a","owner":"min","rate":0},{"name":"b","owner":"max","rate":0},
                     {"name":"t","owner":"target","rate":0}],
        "transitions":[{"from":"a","to":"t","guard":[{"clock":"x","op":"le","const":2}],"reset":[],"weight":0},
                       {"from":"a","to":"b","guard":[{"clock":"x","op":"ge","const":1},{"clock":"x","op":"le","const":2}],"reset":[],"weight":0},
                       {"from":"b","to":"t","guard":[{"clock":"x","op":"le","const":0}],"reset":[],"weight":0}]})");
    try {
        validate_game(g);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.stage() == "validate");
        CHECK(e.kind() == "deadlock");
    }
    g.transitions.back().resets = {};
    g.transitions.back().guard.atoms = {{0, CmpOp::Le, 2}};
    CHECK_NOTHROW(validate_game(g));
}

// ── Semantics ────────────────────────────────────────────────────────

TEST_CASE("edges add delay times rate plus the transition weight") {
    GameDef g = load_fixture("neg_timed.json");
    const int a = g.location_index("a");
    Config c{a, {Rational(1, 2)}};
    // a -> b needs 1 <= x <= 2 and resets x.
    DelayInterval iv = valid_delay_interval(g, c, 0);
    CHECK(iv.lo == Rational(1, 2));
    REQUIRE(iv.hi.has_value());
    CHECK(*iv.hi == Rational(3, 2));
    EdgeResult r = apply_edge(g, c, 0, Rational(1));
    CHECK(r.next.location == g.location_index("b"));
    CHECK(r.next.valuation[0] == 0);
    CHECK(r.weight == Rational(-1) * Rational(1) + Rational(-1));
    CHECK_THROWS_AS(apply_edge(g, c, 0, Rational(1, 4)), Error);
    CHECK_THROWS_AS(apply_edge(g, c, 0, Rational(-1)), Error);
}

TEST_CASE("cumulated weight is additive over concatenation") {
    GameDef g = load_fixture("neg_escape.json");
    std::mt19937_64 rng(5);
    RegionGame rg = build_region_game(g);
    for (int trial = 0; trial < 50; ++trial) {
        Play p{Config{g.location_index("a"), {Rational(0)}}, {}};
        Config c = p.start;
        while (!g.is_target(c.location) && p.size() < 8) {
            auto [t, d] = random_legal_move(rg, c, rng);
            EdgeResult r = apply_edge(g, c, t, d);
            p.edges.push_back({t, d, r.weight});
            c = r.next;
        }
        std::size_t cut = p.size() / 2;
        Play head{p.start, {p.edges.begin(), p.edges.begin() + static_cast<long>(cut)}};
        Play tail{final_config(g, head), {p.edges.begin() + static_cast<long>(cut), p.edges.end()}};
        CHECK(cumulated_weight(concat(head, tail)) == cumulated_weight(head) + cumulated_weight(tail));
        CHECK(final_config(g, concat(head, tail)) == c);
    }
}
