// Exercises the shared library through its C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtg/wtg.h"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::json;

namespace {

std::string data(const std::string& file) { return std::string(WTG_DATA_DIR) + "/" + file; }

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Owns a string returned by the library.
struct Out {
    char* p = nullptr;
    ~Out() { wtg_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

struct Game {
    wtg_game* g = nullptr;
    explicit Game(const std::string& file) { REQUIRE(wtg_game_from_file(data(file).c_str(), &g) == WTG_OK); }
    ~Game() { wtg_game_free(g); }
};

struct Solved {
    wtg_solution* s = nullptr;
    explicit Solved(const wtg_game* g) {
        wtg_solve_options opt{0, 1};
        REQUIRE(wtg_solve(g, &opt, &s) == WTG_OK);
    }
    ~Solved() { wtg_solution_free(s); }
};

json last_error() { return json::parse(wtg_last_error()); }

}  // namespace

TEST_CASE("check reports divergence and the classes") {
    Game g("mixed_signs.json");
    Out out;
    int divergent = -1;
    REQUIRE(wtg_check(g.g, &out.p, &divergent) == WTG_OK);
    CHECK(divergent == 1);
    json j = json::parse(out.str());
    CHECK(j["divergent"] == true);
    CHECK(j["classification"]["counts"]["plus_infinity"].get<int>() > 0);
    CHECK(j["classification"]["counts"]["minus_infinity"].get<int>() > 0);
}

TEST_CASE("solve refuses infinite states until pruning is requested") {
    Game g("mixed_signs.json");
    wtg_solution* s = nullptr;
    wtg_solve_options opt{0, 0};
    CHECK(wtg_solve(g.g, &opt, &s) == WTG_ERROR_DOMAIN);
    CHECK(s == nullptr);
    json e = last_error();
    CHECK(e["error"]["stage"] == "values");
    CHECK(e["error"]["kind"] == "needs_prune");
    CHECK(e["error"]["detail"].get<std::string>().find("--prune") != std::string::npos);
}

TEST_CASE("values plot as the expected polyline and sampled CSV") {
    Game g("mixed_signs.json");
    Solved s(g.g);
    Out values, svg, csv;
    REQUIRE(wtg_solution_values(s.s, &values.p) == WTG_OK);
    REQUIRE(wtg_plot(values.p, "l4", &svg.p, &csv.p) == WTG_OK);
    CHECK(svg.str().find("points=\"0,1 2,3 3,3\"") != std::string::npos);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,x_pq,value,value_pq");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows >= 512);
    CHECK(csv.str().find('\r') == std::string::npos);
}

TEST_CASE("unknown plot location is a domain error") {
    Game g("mixed_signs.json");
    Solved s(g.g);
    Out values, svg;
    REQUIRE(wtg_solution_values(s.s, &values.p) == WTG_OK);
    CHECK(wtg_plot(values.p, "nowhere", &svg.p, nullptr) == WTG_ERROR_DOMAIN);
    CHECK(last_error()["error"]["kind"] == "unknown_location");
}

TEST_CASE("synthesized superposition certifies against the best response") {
    Game g("neg_escape.json");
    Solved s(g.g);
    const char* ps[] = {"3/4"};
    wtg_synth_options opt{"1/10", "100", ps, 1};
    Out out;
    REQUIRE(wtg_synth(s.s, &opt, &out.p) == WTG_OK);
    json j = json::parse(out.str());
    for (const char* key : {"sigma1", "sigma2", "switching", "max", "eta_3_4"}) CHECK(j["strategies"].contains(key));
    std::string eta = j["strategies"]["eta_3_4"].dump();
    wtg_start start{"a", "0"};
    wtg_expect_options eopt{"1/10", "1/100", 0};
    Out value;
    REQUIRE(wtg_expect(s.s, eta.c_str(), nullptr, &start, &eopt, &value.p) == WTG_OK);
    json v = json::parse(value.str());
    CHECK(v["value"] == "-1/4");
    CHECK(v["tail"] == "0/1");
    CHECK(v["max"] == "best-response");
}

TEST_CASE("simulation is reproducible for a fixed seed") {
    Game g("neg_escape.json");
    Solved s(g.g);
    const char* ps[] = {"1/2"};
    wtg_synth_options opt{"1/10", "100", ps, 1};
    Out out;
    REQUIRE(wtg_synth(s.s, &opt, &out.p) == WTG_OK);
    json j = json::parse(out.str());
    std::string eta = j["strategies"]["eta_1_2"].dump(), tau = j["strategies"]["max"].dump();
    wtg_start start{"a", "0"};
    wtg_simulate_options sopt{2000, 7, 0, 20, "1/10"};
    Out a, ac, b, bc;
    REQUIRE(wtg_simulate(s.s, eta.c_str(), tau.c_str(), &start, &sopt, &a.p, &ac.p) == WTG_OK);
    REQUIRE(wtg_simulate(s.s, eta.c_str(), tau.c_str(), &start, &sopt, &b.p, &bc.p) == WTG_OK);
    CHECK(a.str() == b.str());
    CHECK(ac.str() == bc.str());
    CHECK(ac.str().rfind("run,weight,weight_pq,reached\n", 0) == 0);
}

TEST_CASE("usage and parse errors are told apart") {
    wtg_game* g = nullptr;
    CHECK(wtg_game_from_json(nullptr, &g) == WTG_ERROR_USAGE);
    CHECK(last_error()["error"]["stage"] == "api");
    CHECK(wtg_game_from_json("{not json", &g) == WTG_ERROR_DOMAIN);
    CHECK(last_error()["error"]["stage"] == "parse");
    CHECK(g == nullptr);
}

TEST_CASE("game JSON round-trips through the library") {
    Game g("neg_timed.json");
    Out text;
    REQUIRE(wtg_game_to_json(g.g, &text.p) == WTG_OK);
    wtg_game* h = nullptr;
    REQUIRE(wtg_game_from_json(text.p, &h) == WTG_OK);
    Out again;
    REQUIRE(wtg_game_to_json(h, &again.p) == WTG_OK);
    CHECK(text.str() == again.str());
    wtg_game_free(h);
}

TEST_CASE("emulation reports both thresholds and passes on the escape game") {
    Game g("neg_escape.json");
    const char* ps[] = {"1/2", "9/10"};
    wtg_emulate_options opt{"neg_escape", {"a", "0"}, "1/10", "100", ps, 2, 1, 500};
    Out out, csv, svg;
    REQUIRE(wtg_emulate(g.g, &opt, &out.p, &csv.p, &svg.p) == WTG_OK);
    json j = json::parse(out.str());
    CHECK(j["pass"] == true);
    CHECK(j["monotone"] == true);
    CHECK(j["formula"].contains("K"));
    CHECK(j["empirical"].contains("K"));
    CHECK(j["rows"].size() == 2);
    CHECK(svg.str().find("<svg") == 0);
}

TEST_CASE("emulation on a non-divergent game fails in the analysis stage") {
    wtg_game* g = nullptr;
    std::string text = read(data("mixed_signs.json"));
    json j = json::parse(text);
    for (auto& t : j["transitions"])
        if (t["from"] == "l5" && t["to"] == "l5") t["weight"] = 3;
    REQUIRE(wtg_game_from_json(j.dump().c_str(), &g) == WTG_OK);
    Out check;
    int divergent = -1;
    REQUIRE(wtg_check(g, &check.p, &divergent) == WTG_OK);
    CHECK(divergent == 0);
    CHECK(json::parse(check.str())["witness"].is_object());
    wtg_emulate_options opt{"variant", {"l2", "0"}, "1/10", "100", nullptr, 0, 1, 100};
    Out out;
    CHECK(wtg_emulate(g, &opt, &out.p, nullptr, nullptr) == WTG_ERROR_DOMAIN);
    CHECK(last_error()["error"]["stage"] == "analysis");
    wtg_game_free(g);
}
