#include "reebflow/parallel.hpp"

namespace reebflow {

Exec& default_exec() {
    static Exec e = Exec::parallel;
    return e;
}

namespace {
double pairwise_rec(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    size_t half = v.size() / 2;
    return pairwise_rec(v.subspan(0, half)) + pairwise_rec(v.subspan(half));
}
}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_rec(v); }

double max_of(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        if (x > m) m = x;
    return m;
}

}  // namespace reebflow
