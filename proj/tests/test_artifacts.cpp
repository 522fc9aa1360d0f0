#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/random_games.hpp"

#include "wtg/artifacts.hpp"
#include "wtg/emulate.hpp"
#include "wtg/reports.hpp"

#include "wtg/error.hpp"

#include <json.hpp>

#include <algorithm>

using namespace wtg;
using namespace wtg::testing;

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

}  // namespace

// ── Value files ──────────────────────────────────────────────────────

TEST_CASE("value files round-trip exactly") {
    std::vector<Solution> sols{solve_game(load_fixture("mixed_signs.json")), solve_game(load_fixture("neg_timed.json"))};
    for (const auto& rd : divergent_games(10)) sols.push_back(rd.solution);
    for (const Solution& sol : sols) {
        LoadedValues lv = values_from_json(values_to_json(sol));
        CHECK(lv.clock_bound == sol.game.clock_bound);
        REQUIRE(lv.locations.size() == sol.game.locations.size());
        for (std::size_t l = 0; l < lv.locations.size(); ++l) {
            CHECK(lv.locations[l] == sol.game.locations[l].name);
            CHECK(lv.value.loc[l] == sol.value.loc[l]);
        }
    }
}

TEST_CASE("value files carry classification counts and cells") {
    Solution sol = solve_game(load_fixture("mixed_signs.json"));
    auto doc = nlohmann::json::parse(values_to_json(sol));
    CHECK(doc["converged"] == true);
    CHECK(doc["cells"]["knots"].size() == sol.cells.knots.size());
    CHECK(doc["locations"].size() == sol.game.locations.size());
}

// ── Polylines ────────────────────────────────────────────────────────

TEST_CASE("polylines break at jumps and drop collinear points") {
    PAFunction f = pa_envelope({PieceSpec{q(0), q(1), true, true, 1, 0}, PieceSpec{q(1), q(2), false, true, 1, 0},
                                PieceSpec{q(2), q(3), false, true, 0, 5}},
                               Envelope::Min);
    auto lines = polylines(f);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == Polyline{{q(0), q(0)}, {q(2), q(2)}});
    CHECK(lines[1] == Polyline{{q(2), q(5)}, {q(3), q(5)}});
}

TEST_CASE("isolated knot values become single points and infinite parts vanish") {
    PAFunction f = pa_envelope({PieceSpec{q(0), q(1), true, false, 0, 1}, PieceSpec{q(1), q(1), true, true, 0, 4},
                                PieceSpec{q(3), q(3), true, true, 0, 7}},
                               Envelope::Min);
    CHECK(f.eval(q(2)).is_pos_inf());
    auto lines = polylines(f);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == Polyline{{q(0), q(1)}, {q(1), q(1)}});
    CHECK(lines[1] == Polyline{{q(1), q(4)}});
    CHECK(lines[2] == Polyline{{q(3), q(7)}});
}

TEST_CASE("polylines reproduce the finite values of random solutions") {
    for (const auto& rd : divergent_games(10))
        for (const PAFunction& f : rd.solution.value.loc)
            for (const Polyline& line : polylines(f))
                for (const auto& [x, y] : line) {
                    ExtRational v = f.eval(x), l = x > f.lo() ? f.left_limit(x) : v, r = x < f.hi() ? f.right_limit(x) : v;
                    CHECK((v == ExtRational(y) || l == ExtRational(y) || r == ExtRational(y)));
                }
}

TEST_CASE("plots are well-formed svg") {
    Series s{"v", {{{q(0), q(1)}, {q(2), q(3)}}, {{q(3), q(3)}}}};
    std::string svg = svg_plot("t", "x", "y", {s});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("points=\"0,1 2,3\"") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

// ── Reports ──────────────────────────────────────────────────────────

TEST_CASE("check reports name the witness of a non-divergent game") {
    auto ok = nlohmann::json::parse(check_to_json(run_check(load_fixture("mixed_signs.json"))));
    CHECK(ok["divergent"] == true);
    CHECK(ok["witness"].is_null());
    auto bad = nlohmann::json::parse(check_to_json(run_check(mixed_signs_loop_weight3())));
    CHECK(bad["divergent"] == false);
    CHECK(!bad["witness"].is_null());
}

// ── Emulation ────────────────────────────────────────────────────────

TEST_CASE("emulation artifacts are reproducible for a fixed seed") {
    GameDef g = load_fixture("neg_escape.json");
    EmulateOptions opt;
    opt.start = Config{g.location_index("a"), {Rational(0)}};
    opt.mc_runs = 2000;
    opt.empirical_plays = 200;
    EmulateReport a = cmd_emulate(g, "neg_escape", opt), b = cmd_emulate(g, "neg_escape", opt);
    CHECK(emulate_to_csv(a) == emulate_to_csv(b));
    CHECK(emulate_to_json(g, a) == emulate_to_json(g, b));
    CHECK(a.pass);
    CHECK(a.rows.size() == opt.p_grid.size());
    std::string csv = emulate_to_csv(a);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(opt.p_grid.size() + 1));
    CHECK(emulate_to_svg(a).find("</svg>") != std::string::npos);

    opt.start = Config{7, {Rational(0)}};
    CHECK_THROWS_AS(cmd_emulate(g, "neg_escape", opt), Error);
}
