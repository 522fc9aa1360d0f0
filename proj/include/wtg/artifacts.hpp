#pragma once

#include "wtg/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wtg {

// ── Value files ──────────────────────────────────────────────────────

std::string pa_to_json_text(const PAFunction& f);

// The solved values per location, with polylines, cells and classification counts.
std::string values_to_json(const Solution& sol);

struct LoadedValues {
    long clock_bound = 0;
    std::vector<std::string> locations;
    PAValue value;
};
LoadedValues values_from_json(const std::string& text);

// ── Plots ────────────────────────────────────────────────────────────

using Point = std::pair<Rational, Rational>;
using Polyline = std::vector<Point>;

// Maximal continuous stretches of the finite part of f, without collinear
// interior points. Jumps start a new polyline; isolated knot values become
// one-point polylines.
std::vector<Polyline> polylines(const PAFunction& f);

struct Series {
    std::string name;
    std::vector<Polyline> lines;
};

// Points are written in data coordinates inside a scaling group transform.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace wtg
