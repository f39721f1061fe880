#include "horolab/detail/quadrature.hpp"

#include <map>
#include <mutex>

namespace horolab::detail {

namespace {

struct Rule {
    std::vector<double> x, w;
};

// Newton iteration on P_n with the standard three-term recurrence.
Rule compute_rule(int n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

std::map<int, Rule>& cache() {
    static std::map<int, Rule> c;
    return c;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

const Rule& rule(int n) {
    if (n < 1) throw validation_error("gauss rule: n must be >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(n);
    if (it == cache().end()) it = cache().emplace(n, compute_rule(n)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int n) { return rule(n).x; }
const std::vector<double>& gl_weights(int n) { return rule(n).w; }

}  // namespace horolab::detail
