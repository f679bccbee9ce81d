#pragma once

// Deterministic sampling: Halton points in a chart's sample box, and a
// seeded random generator for trajectory start points. The generator is
// pinned for reproducibility across platforms: mt19937_64, uniforms by
// (x >> 11) * 2^-53, normals by Box-Muller on those uniforms.

#include <cstdint>
#include <random>
#include <vector>

#include "reebflow/chart.hpp"

namespace reebflow {

// van der Corput radical inverse in the given base, index >= 1
double radical_inverse(uint64_t index, uint32_t base);

// n Halton points in the chart's sample box (intersected with bounds by
// construction). Deterministic; indices start at `skip + 1`.
std::vector<Point> default_samples(const Chart& chart, int n = 100, uint64_t skip = 0);

class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // uniformly distributed point on the unit sphere in R^dim
    Point unit_sphere_point(int dim) {
        Point p(dim);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                p[i] = normal();
                n2 += p[i] * p[i];
            }
        } while (n2 == 0.0);
        double inv = 1.0 / std::sqrt(n2);
        for (auto& v : p) v *= inv;
        return p;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace reebflow
