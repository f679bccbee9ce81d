#include "reebflow/sampling.hpp"

namespace reebflow {

namespace {
constexpr uint32_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double radical_inverse(uint64_t index, uint32_t base) {
    double inv_base = 1.0 / base, f = inv_base, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv_base;
    }
    return r;
}

std::vector<Point> default_samples(const Chart& chart, int n, uint64_t skip) {
    const int d = chart.dim();
    if (d > static_cast<int>(std::size(kPrimes)))
        throw std::invalid_argument("sampling supports at most 12 coordinates");
    std::vector<Point> pts(n, Point(d));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < d; ++i) {
            double u = radical_inverse(skip + k + 1, kPrimes[i]);
            pts[k][i] = chart.box[i].lo + u * (chart.box[i].hi - chart.box[i].lo);
        }
    }
    return pts;
}

}  // namespace reebflow
