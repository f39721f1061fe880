#pragma once

// Shared quadrature building blocks: cached Gauss-Legendre rules, an adaptive
// bisection driver, and the node-doubling periodic mean used for constant
// terms. All drivers work for real or complex integrands.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "horolab/errors.hpp"

namespace horolab::detail {

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1]; cached, thread-safe.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

template <class F>
auto gauss(F&& f, double a, double b, int n) {
    const auto& x = gl_nodes(n);
    const auto& w = gl_weights(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = f(mid + half * x[0]) * (w[0] * half);
    for (int i = 1; i < n; ++i) acc += f(mid + half * x[i]) * (w[i] * half);
    return acc;
}

// Adaptive bisection with a G15/G31 error estimate per panel. `eps` is an
// absolute target for the whole interval; panels get budget pro rata by width.
template <class F>
auto adaptive_gauss(F&& f, double a, double b, double eps, int max_panels = 4000) {
    using R = decltype(f(a));
    struct Panel { double a, b; };
    std::vector<Panel> stack{{a, b}};
    const double total = b - a;
    R sum{};
    double magnitude = 0.0;  // running scale, floors the budget near rounding noise
    int used = 0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        R coarse = gauss(f, p.a, p.b, 15);
        R fine = gauss(f, p.a, p.b, 31);
        double err = std::abs(fine - coarse);
        double budget = std::max(eps * (p.b - p.a) / total, 5e-15 * magnitude);
        if (err <= budget || err <= 1e-15 * std::abs(fine) ||
            (p.b - p.a) <= 1e-13 * total || ++used >= max_panels) {
            if (used >= max_panels && err > 16 * budget)
                throw numeric_error("adaptive_gauss: panel budget exhausted");
            sum += fine;
            magnitude += std::abs(fine);
        } else {
            double m = 0.5 * (p.a + p.b);
            stack.push_back({p.a, m});
            stack.push_back({m, p.b});
        }
    }
    return sum;
}

template <class T>
struct QuadResult {
    T value{};
    double err = 0.0;  // last doubling difference
    int n = 0;         // nodes used
    bool converged = false;
};

// Mean of a 1-periodic function over one period by the rectangle rule on the
// grid j/n (spectrally accurate for smooth periodic integrands), doubling n
// until two successive levels agree to eps.
template <class F>
auto periodic_mean(F&& f, double eps, int n0 = 16, int n_max = (1 << 22)) {
    using R = decltype(f(0.0));
    int n = n0 < 2 ? 2 : n0;
    R acc{};
    for (int j = 0; j < n; ++j) acc += f(double(j) / n);
    R mean = acc * (1.0 / n);

    QuadResult<R> out;
    while (n < n_max) {
        R shifted{};
        for (int j = 0; j < n; ++j) shifted += f((j + 0.5) / n);
        R mean2 = (mean + shifted * (1.0 / n)) * 0.5;
        double diff = std::abs(mean2 - mean);
        n *= 2;
        mean = mean2;
        if (diff < eps) {
            out.value = mean;
            out.err = diff;
            out.n = n;
            out.converged = true;
            return out;
        }
        out.err = diff;
    }
    out.value = mean;
    out.n = n;
    out.converged = false;
    return out;
}

}  // namespace horolab::detail
