#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reebflow {

using Point = std::vector<double>;

// Open interval; defaults to the whole real line.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x > lo && x < hi; }
};

// Closed finite box used for deterministic sampling.
struct Box {
    double lo = -1.0;
    double hi = 1.0;
};

// A named coordinate domain. Everything (fields, forms, maps) lives over a
// chart; per-coordinate open bounds limit validity and a finite box inside
// the bounds fixes where default sample sets are drawn.
struct Chart {
    std::string name;
    std::vector<std::string> coords;
    std::vector<Interval> bounds;
    std::vector<Box> box;

    Chart() = default;
    Chart(std::string name_, std::vector<std::string> coords_)
        : name(std::move(name_)), coords(std::move(coords_)) {
        bounds.resize(coords.size());
        box.resize(coords.size());
        validate();
    }

    int dim() const { return static_cast<int>(coords.size()); }

    int index_of(const std::string& c) const {
        for (size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == c) return static_cast<int>(i);
        return -1;
    }

    bool in_bounds(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (!bounds[i].contains(x[i])) return false;
        return true;
    }

    void set_bounds(int i, double lo, double hi) {
        bounds.at(i) = {lo, hi};
        if (box[i].lo <= lo || box[i].hi >= hi) {
            // keep the sample box strictly inside the open bounds
            double w = hi - lo;
            box[i] = {lo + 0.05 * w, hi - 0.05 * w};
        }
    }
    void set_box(int i, double lo, double hi) { box.at(i) = {lo, hi}; }
    void set_box_all(double lo, double hi) {
        for (auto& b : box) b = {lo, hi};
    }

    void validate() const {
        if (coords.empty()) throw std::invalid_argument("chart '" + name + "' has no coordinates");
        for (size_t i = 0; i < coords.size(); ++i)
            for (size_t j = i + 1; j < coords.size(); ++j)
                if (coords[i] == coords[j])
                    throw std::invalid_argument("chart '" + name + "' repeats coordinate '" + coords[i] + "'");
    }

    bool same_as(const Chart& o) const { return name == o.name && coords == o.coords; }
};

// Chart of M x (extra coordinate), used by symplectizations and
// contactifications. The new coordinate is appended unless prepend is set.
inline Chart extend_chart(const Chart& base, const std::string& coord, Interval bounds, Box box,
                          bool prepend = false, const std::string& name = "") {
    Chart c;
    c.name = name.empty() ? base.name + "x" + coord : name;
    if (prepend) {
        c.coords.push_back(coord);
        c.bounds.push_back(bounds);
        c.box.push_back(box);
    }
    for (int i = 0; i < base.dim(); ++i) {
        c.coords.push_back(base.coords[i]);
        c.bounds.push_back(base.bounds[i]);
        c.box.push_back(base.box[i]);
    }
    if (!prepend) {
        c.coords.push_back(coord);
        c.bounds.push_back(bounds);
        c.box.push_back(box);
    }
    c.validate();
    return c;
}

}  // namespace reebflow
