#include "wtg/artifacts.hpp"
#include "wtg/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace wtg {

using json = nlohmann::ordered_json;

namespace {

json piece_json(const Piece& p) {
    switch (p.kind) {
        case ExtKind::PosInf: return json{{"kind", "+inf"}};
        case ExtKind::NegInf: return json{{"kind", "-inf"}};
        default: return json{{"kind", "affine"}, {"slope", to_pq(p.f.slope)}, {"intercept", to_pq(p.f.intercept)}};
    }
}

Piece piece_from(const json& j) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "+inf") return Piece::constant(ExtRational::pos_inf());
    if (k == "-inf") return Piece::constant(ExtRational::neg_inf());
    if (k == "affine")
        return Piece::finite(parse_rational(j.at("slope").get<std::string>()), parse_rational(j.at("intercept").get<std::string>()));
    throw Error("parse", "schema", "unknown piece kind " + k);
}

json pa_json(const PAFunction& f) {
    json j;
    json knots = json::array(), values = json::array(), pieces = json::array();
    for (const auto& k : f.knots) knots.push_back(to_pq(k));
    for (const auto& v : f.values) values.push_back(v.str());
    for (const auto& p : f.pieces) pieces.push_back(piece_json(p));
    j["knots"] = knots;
    j["values"] = values;
    j["pieces"] = pieces;
    return j;
}

PAFunction pa_from(const json& j) {
    PAFunction f;
    for (const auto& k : j.at("knots")) f.knots.push_back(parse_rational(k.get<std::string>()));
    for (const auto& v : j.at("values")) f.values.push_back(ExtRational::parse(v.get<std::string>()));
    for (const auto& p : j.at("pieces")) f.pieces.push_back(piece_from(p));
    if (f.knots.empty() || f.values.size() != f.knots.size() || f.pieces.size() + 1 != f.knots.size())
        throw Error("parse", "schema", "inconsistent piecewise-affine function");
    return f;
}

// (interval, slope, intercept) triples of the simplified function; knots are
// degenerate closed intervals with slope 0.
json intervals_json(const PAFunction& input) {
    PAFunction f = input;
    f.simplify();
    json out = json::array();
    auto entry = [&](const Rational& lo, const Rational& hi, bool closed, const Piece& p) {
        json j{{"lo", to_pq(lo)}, {"hi", to_pq(hi)}, {"closed", closed}};
        if (p.kind == ExtKind::Finite) {
            j["slope"] = to_pq(p.f.slope);
            j["intercept"] = to_pq(p.f.intercept);
        } else {
            j["value"] = p.kind == ExtKind::PosInf ? "+inf" : "-inf";
        }
        out.push_back(j);
    };
    for (std::size_t i = 0; i < f.knots.size(); ++i) {
        entry(f.knots[i], f.knots[i], true, Piece::constant(f.values[i]));
        if (i + 1 < f.knots.size()) entry(f.knots[i], f.knots[i + 1], false, f.pieces[i]);
    }
    return out;
}

bool collinear(const Point& a, const Point& b, const Point& c) {
    return (b.second - a.second) * (c.first - a.first) == (c.second - a.second) * (b.first - a.first);
}

}  // namespace

std::string pa_to_json_text(const PAFunction& f) { return pa_json(f).dump(); }

std::string values_to_json(const Solution& sol) {
    const GameDef& g = sol.game;
    json doc;
    doc["clock"] = g.clocks.at(0);
    doc["clock_bound"] = g.clock_bound;
    doc["iterations"] = sol.iteration.iterations;
    doc["converged"] = sol.iteration.converged;
    json cls;
    cls["finite"] = sol.classes.count(ValueClass::Finite);
    cls["plus_infinity"] = sol.classes.count(ValueClass::PlusInfinity);
    cls["minus_infinity"] = sol.classes.count(ValueClass::MinusInfinity);
    doc["classes"] = cls;
    doc["region_states"] = sol.full.size();
    doc["pruned_states"] = sol.pruned.size();
    json locs = json::array();
    for (std::size_t l = 0; l < g.locations.size(); ++l) {
        json j;
        j["name"] = g.locations[l].name;
        j["value"] = pa_json(sol.value.loc[l]);
        j["intervals"] = intervals_json(sol.value.loc[l]);
        json lines = json::array();
        for (const auto& line : polylines(sol.value.loc[l])) {
            json pts = json::array();
            for (const auto& [x, y] : line) pts.push_back(json::array({to_pq(x), to_pq(y)}));
            lines.push_back(pts);
        }
        j["polylines"] = lines;
        locs.push_back(j);
    }
    doc["locations"] = locs;
    json knots = json::array();
    for (const auto& k : sol.cells.knots) knots.push_back(to_pq(k));
    doc["cells"] = json{{"knots", knots}, {"alpha", sol.cells.alpha_cells}};
    return doc.dump(2) + "\n";
}

LoadedValues values_from_json(const std::string& text) {
    LoadedValues out;
    try {
        json doc = json::parse(text);
        out.clock_bound = doc.at("clock_bound").get<long>();
        out.value.clock_bound = out.clock_bound;
        for (const auto& l : doc.at("locations")) {
            out.locations.push_back(l.at("name").get<std::string>());
            out.value.loc.push_back(pa_from(l.at("value")));
        }
    } catch (const json::parse_error& e) {
        throw Error("parse", "syntax", std::string("values file: ") + e.what());
    } catch (const json::exception& e) {
        throw Error("parse", "schema", std::string("values file: ") + e.what());
    }
    return out;
}

std::vector<Polyline> polylines(const PAFunction& input) {
    PAFunction f = input;
    f.simplify();
    std::vector<Polyline> out;
    Polyline cur;
    auto flush = [&]() {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    auto add = [&](const Point& p) {
        if (!cur.empty() && cur.back() == p) return;
        if (cur.size() >= 2 && collinear(cur[cur.size() - 2], cur.back(), p)) cur.back() = p;
        else cur.push_back(p);
    };
    for (std::size_t i = 0; i < f.knots.size(); ++i) {
        const ExtRational& v = f.values[i];
        if (v.finite()) {
            if (!cur.empty() && cur.back() != Point{f.knots[i], v.value}) flush();
            add({f.knots[i], v.value});
        } else {
            flush();
        }
        if (i + 1 == f.knots.size()) break;
        const Piece& p = f.pieces[i];
        if (p.kind != ExtKind::Finite) {
            flush();
            continue;
        }
        Point left{f.knots[i], p.f.at(f.knots[i])}, right{f.knots[i + 1], p.f.at(f.knots[i + 1])};
        if (cur.empty() || cur.back() != left) {
            flush();
            add(left);
        }
        add(right);
    }
    flush();
    return out;
}

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    bool any = false;
    Rational x0, x1, y0, y1;
    for (const auto& s : series)
        for (const auto& line : s.lines)
            for (const auto& [x, y] : line) {
                if (!any) { x0 = x1 = x; y0 = y1 = y; any = true; }
                x0 = std::min(x0, x); x1 = std::max(x1, x);
                y0 = std::min(y0, y); y1 = std::max(y1, y);
            }
    if (!any) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) { y0 -= 1; y1 += 1; }
    const double W = 640, H = 400, margin = 50;
    const double sx = (W - 2 * margin) / to_double(x1 - x0), sy = (H - 2 * margin) / to_double(y1 - y0);
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
    o << "  <title>" << title << "</title>\n";
    o << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "  <text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    o << "  <text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label
      << " [" << to_decimal(x0) << ", " << to_decimal(x1) << "]</text>\n";
    o << "  <text x=\"12\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 " << H / 2 << ")\">"
      << y_label << " [" << to_decimal(y0) << ", " << to_decimal(y1) << "]</text>\n";
    o << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << W - 2 * margin << "\" height=\""
      << H - 2 * margin << "\" fill=\"none\" stroke=\"#999\"/>\n";
    o << "  <g transform=\"translate(" << margin - to_double(x0) * sx << " " << H - margin + to_double(y0) * sy
      << ") scale(" << sx << " " << -sy << ")\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % 6];
        for (const auto& line : series[i].lines) {
            if (line.size() == 1) {
                o << "    <circle class=\"" << series[i].name << "\" cx=\"" << to_decimal(line[0].first) << "\" cy=\""
                  << to_decimal(line[0].second) << "\" r=\"3\" fill=\"" << color
                  << "\" vector-effect=\"non-scaling-stroke\" transform-origin=\"0 0\"/>\n";
                continue;
            }
            o << "    <polyline class=\"" << series[i].name << "\" fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\" points=\"";
            for (std::size_t k = 0; k < line.size(); ++k)
                o << (k ? " " : "") << to_decimal(line[k].first) << "," << to_decimal(line[k].second);
            o << "\"/>\n";
        }
    }
    o << "  </g>\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        o << "  <text x=\"" << W - margin - 100 << "\" y=\"" << margin + 16 * (i + 1) << "\" font-size=\"12\" fill=\""
          << colors[i % 6] << "\">" << series[i].name << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace wtg
