#pragma once

#include <cstdint>
#include <vector>

#include "horolab/modfun.hpp"

namespace horolab {

// Reduced rational a/c (plus the cusp 0/1): c >= 1, gcd(a, c) = 1, |a| < c.
struct FareyFraction {
    std::int64_t a = 0;
    std::int64_t c = 1;

    FareyFraction() = default;
    FareyFraction(std::int64_t a, std::int64_t c);  // validates
    double value() const { return double(a) / double(c); }
};

// Farey fractions in [0, 1) with denominator <= q_max, ascending, by
// Stern-Brocot mediants.
std::vector<FareyFraction> farey_sequence(int q_max);

// Fraction of the n midpoint samples of the closed horocycle at height y whose
// reduced representative lands in u (counted half-open, matching the
// reduction tie-breaks). u must lie inside the closed fundamental domain.
// Deterministic for fixed (y, u, n), any thread count.
double equidist_ratio(double y, const Box& u, std::int64_t n, int threads = 0);

// Least-squares slope of log|ratio - A(u)/A(D)| against log y. flagged is set
// when residuals sit at the 1/n discretization floor.
double equidist_exponent(const Box& u, const std::vector<double>& y_list, std::int64_t n,
                         bool* flagged = nullptr, int threads = 0);

struct CuspProbePoint {
    double y;
    double log_abs_f;            // log |f(a/c + iy)|
    double predicted_printed;    // 2 pi beta c^2 / y   (as printed in the source)
    double predicted_transport;  // pi beta / (c^2 y)   (gamma-transport height)
};

// Evaluates f along the vertical approach to the cusp a/c. Exponential class
// (j runs too, flagged exploratory by its spec).
std::vector<CuspProbePoint> cusp_probe(const ModularFunctionSpec& f, const FareyFraction& cusp,
                                       const std::vector<double>& y_list,
                                       TruncationBudget budget = {});

// slope of log|f| against 1/y from the probe points
double cusp_probe_slope(const std::vector<CuspProbePoint>& pts);

// a_r(y) = int_0^1 f(x+iy) e^{-2 pi i r x} dx by phased periodic quadrature.
cplx fourier_mode(const ModularFunctionSpec& f, int r, double y, TruncationBudget budget = {});

}  // namespace horolab
