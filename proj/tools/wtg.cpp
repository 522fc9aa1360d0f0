// Command-line front end. Every command prints JSON to stdout or --out;
// domain errors exit 1 with {"error": {...}} on stderr, usage errors exit 2.

#include "wtg/wtg.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

// ── Plumbing ─────────────────────────────────────────────────────────

struct DomainFailure {
    int code;
};

struct CString {
    char* p = nullptr;
    ~CString() { wtg_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

void check(wtg_status s) {
    if (s == WTG_OK) return;
    std::cerr << wtg_last_error() << "\n";
    throw DomainFailure{s == WTG_ERROR_USAGE ? 2 : 1};
}

[[noreturn]] void fail_io(const std::string& detail) {
    nlohmann::ordered_json e{{"error", {{"stage", "cli"}, {"kind", "io"}, {"detail", detail}}}};
    std::cerr << e.dump() << "\n";
    throw DomainFailure{1};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io("cannot write " + path);
    out << text;
}

// To --out when given, stdout otherwise.
void emit(const std::string& out, const std::string& text) {
    if (out.empty()) std::cout << text;
    else write_file(out, text);
}

using GamePtr = std::unique_ptr<wtg_game, decltype(&wtg_game_free)>;
using SolutionPtr = std::unique_ptr<wtg_solution, decltype(&wtg_solution_free)>;

GamePtr load_game(const std::string& path) {
    wtg_game* g = nullptr;
    check(wtg_game_from_file(path.c_str(), &g));
    return GamePtr(g, wtg_game_free);
}

SolutionPtr solve(const wtg_game* g, long max_iters, bool prune) {
    wtg_solve_options opt{max_iters, prune ? 1 : 0};
    wtg_solution* s = nullptr;
    check(wtg_solve(g, &opt, &s));
    return SolutionPtr(s, wtg_solution_free);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
    std::vector<const char*> out;
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
}

struct Globals {
    std::string out;
    unsigned long long seed = 1;
    long max_iters = 0;
    bool prune = false;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted timed game solver"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals gl;
    app.add_option("--out", gl.out, "Output file (directory for synth)");
    app.add_option("--seed", gl.seed, "Random seed");
    app.add_option("--max-iters", gl.max_iters, "Bound on value iterations");
    app.add_flag("--prune", gl.prune, "Drop +inf/-inf states before solving");

    std::string game_path;
    auto add_game = [&](CLI::App* c) { c->add_option("game", game_path, "Game JSON file")->required(); };

    // ── check / regions / solve ──
    auto* c_check = app.add_subcommand("check", "Divergence report and value classification");
    add_game(c_check);
    auto* c_regions = app.add_subcommand("regions", "Region game dump");
    add_game(c_regions);
    auto* c_solve = app.add_subcommand("solve", "Value function of the game");
    add_game(c_solve);

    // ── synth ──
    std::string epsilon = "1/10", N = "100";
    std::vector<std::string> p_values;
    auto* c_synth = app.add_subcommand("synth", "Switching, attractor, Max and superposition strategies");
    add_game(c_synth);
    c_synth->add_option("--epsilon", epsilon, "Precision");
    c_synth->add_option("--N", N, "Lower cap on the guaranteed value");
    c_synth->add_option("--p", p_values, "Superposition probabilities to emit");

    // ── expect / simulate ──
    std::string min_path, max_path = "best-response", start_loc, start_clock = "0", tol = "1/100";
    unsigned long long max_horizon = 0, runs = 10000, max_steps = 0, zone_K = 0;
    std::string csv_path, svg_path;
    auto add_play = [&](CLI::App* c) {
        add_game(c);
        c->add_option("--min", min_path, "Min strategy file")->required();
        c->add_option("--max", max_path, "Max strategy file or best-response");
        c->add_option("--start", start_loc, "Start location")->required();
        c->add_option("--clock", start_clock, "Start clock value");
        c->add_option("--epsilon", epsilon, "Precision of the best response");
    };
    auto* c_expect = app.add_subcommand("expect", "Certified expected weight");
    add_play(c_expect);
    c_expect->add_option("--tol", tol, "Certification tolerance");
    c_expect->add_option("--max-horizon", max_horizon, "Longest explored play");
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimate of the expected weight");
    add_play(c_sim);
    c_sim->add_option("--runs", runs, "Number of plays");
    c_sim->add_option("--max-steps", max_steps, "Cut-off length of a play");
    c_sim->add_option("--zone-K", zone_K, "Length boundary of the zone tallies");
    c_sim->add_option("--csv", csv_path, "Per-run weights");

    // ── emulate ──
    auto* c_emu = app.add_subcommand("emulate", "Memoryless superposition against the best response over a p grid");
    add_game(c_emu);
    c_emu->add_option("--start", start_loc, "Start location")->required();
    c_emu->add_option("--clock", start_clock, "Start clock value");
    c_emu->add_option("--epsilon", epsilon, "Precision");
    c_emu->add_option("--N", N, "Lower cap on the guaranteed value");
    c_emu->add_option("--p", p_values, "Probability grid");
    c_emu->add_option("--runs", runs, "Monte Carlo plays per p");
    c_emu->add_option("--csv", csv_path, "Per-p table");
    c_emu->add_option("--svg", svg_path, "Value against p");

    // ── plot ──
    std::string values_path, loc;
    auto* c_plot = app.add_subcommand("plot", "SVG (and CSV) of one location's value");
    c_plot->add_option("values", values_path, "Values file from solve")->required();
    c_plot->add_option("--loc", loc, "Location")->required();
    c_plot->add_option("--csv", csv_path, "Sampled values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_check->parsed()) {
            auto g = load_game(game_path);
            CString out;
            int divergent = 0;
            check(wtg_check(g.get(), &out.p, &divergent));
            emit(gl.out, out.str());
            return divergent ? 0 : 1;
        }
        if (c_regions->parsed()) {
            auto g = load_game(game_path);
            CString out;
            check(wtg_regions(g.get(), &out.p));
            emit(gl.out, out.str());
            return 0;
        }
        if (c_solve->parsed()) {
            auto g = load_game(game_path);
            auto s = solve(g.get(), gl.max_iters, gl.prune);
            CString out;
            check(wtg_solution_values(s.get(), &out.p));
            emit(gl.out, out.str());
            return 0;
        }
        if (c_synth->parsed()) {
            auto g = load_game(game_path);
            auto s = solve(g.get(), gl.max_iters, true);
            auto ps = c_strings(p_values);
            wtg_synth_options opt{epsilon.c_str(), N.c_str(), ps.data(), ps.size()};
            CString out;
            check(wtg_synth(s.get(), &opt, &out.p));
            if (gl.out.empty()) {
                std::cout << out.str();
                return 0;
            }
            // One file per strategy inside the --out directory.
            std::filesystem::create_directories(gl.out);
            auto doc = nlohmann::ordered_json::parse(out.str());
            for (const auto& [name, strategy] : doc["strategies"].items())
                write_file((std::filesystem::path(gl.out) / (name + ".json")).string(), strategy.dump(2) + "\n");
            doc.erase("strategies");
            write_file((std::filesystem::path(gl.out) / "summary.json").string(), doc.dump(2) + "\n");
            return 0;
        }
        if (c_expect->parsed() || c_sim->parsed()) {
            auto g = load_game(game_path);
            auto s = solve(g.get(), gl.max_iters, true);
            std::string min_text = read_file(min_path);
            std::optional<std::string> max_text;
            if (max_path != "best-response") max_text = read_file(max_path);
            wtg_start start{start_loc.c_str(), start_clock.c_str()};
            CString out;
            if (c_expect->parsed()) {
                wtg_expect_options opt{epsilon.c_str(), tol.c_str(), max_horizon};
                check(wtg_expect(s.get(), min_text.c_str(), max_text ? max_text->c_str() : nullptr, &start, &opt, &out.p));
            } else {
                wtg_simulate_options opt{runs, gl.seed, max_steps, zone_K, epsilon.c_str()};
                CString csv;
                check(wtg_simulate(s.get(), min_text.c_str(), max_text ? max_text->c_str() : nullptr, &start, &opt,
                                   &out.p, csv_path.empty() ? nullptr : &csv.p));
                if (!csv_path.empty()) write_file(csv_path, csv.str());
            }
            emit(gl.out, out.str());
            return 0;
        }
        if (c_emu->parsed()) {
            auto g = load_game(game_path);
            auto ps = c_strings(p_values);
            std::string id = std::filesystem::path(game_path).stem().string();
            wtg_emulate_options opt{id.c_str(), {start_loc.c_str(), start_clock.c_str()}, epsilon.c_str(), N.c_str(),
                                    ps.data(), ps.size(), gl.seed, runs};
            CString out, csv, svg;
            check(wtg_emulate(g.get(), &opt, &out.p, &csv.p, &svg.p));
            if (!csv_path.empty()) write_file(csv_path, csv.str());
            if (!svg_path.empty()) write_file(svg_path, svg.str());
            emit(gl.out, out.str());
            return 0;
        }
        if (c_plot->parsed()) {
            std::string values = read_file(values_path);
            CString svg, csv;
            check(wtg_plot(values.c_str(), loc.c_str(), &svg.p, csv_path.empty() ? nullptr : &csv.p));
            if (!csv_path.empty()) write_file(csv_path, csv.str());
            emit(gl.out, svg.str());
            return 0;
        }
    } catch (const DomainFailure& f) {
        return f.code;
    }
    return 2;
}
