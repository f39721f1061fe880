#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "horolab/errors.hpp"

namespace horolab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Point x + iy in the upper half-plane (y > 0, finite components).
struct HPoint {
    double x = 0.0;
    double y = 1.0;

    bool valid() const noexcept {
        return std::isfinite(x) && std::isfinite(y) && y > 0.0;
    }
    cplx to_complex() const noexcept { return {x, y}; }
};

inline void require_valid(const HPoint& z, const char* who) {
    if (!z.valid())
        throw validation_error(std::string(who) +
                               ": point must have finite x and y > 0");
}

// Integer 2x2 matrix of determinant +1.
struct UniMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static UniMatrix identity() noexcept { return {}; }
    static UniMatrix translation(std::int64_t n) noexcept { return {1, n, 0, 1}; }
    static UniMatrix inversion() noexcept { return {0, -1, 1, 0}; }

    std::int64_t det() const noexcept { return a * d - b * c; }
    bool is_identity() const noexcept { return a == 1 && b == 0 && c == 0 && d == 1; }
    UniMatrix inverse() const noexcept { return {d, -b, -c, a}; }

    // Exact integer product; throws numeric_error on int64 overflow.
    UniMatrix operator*(const UniMatrix& o) const;

    bool operator==(const UniMatrix& o) const noexcept {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

inline void require_unimodular(const UniMatrix& m, const char* who) {
    if (m.det() != 1)
        throw validation_error(std::string(who) + ": matrix must have det == 1");
}

// Result of reduction to the standard fundamental domain.
struct ReductionResult {
    HPoint point;       // reduced representative
    UniMatrix matrix;   // gamma with gamma(input) == point
    int steps = 0;      // inversion/translation rounds performed
};

// Coordinate box [x_lo, x_hi] x [y_lo, y_hi); y_hi may be +inf.
struct Box {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 1.0;
    double y_hi = std::numeric_limits<double>::infinity();

    bool valid() const noexcept {
        return std::isfinite(x_lo) && std::isfinite(x_hi) && x_lo < x_hi &&
               std::isfinite(y_lo) && y_lo > 0.0 && y_lo < y_hi;
    }
};

inline void require_valid(const Box& u, const char* who) {
    if (!u.valid())
        throw validation_error(std::string(who) +
                               ": box needs x_lo < x_hi and 0 < y_lo < y_hi");
}

// Per-call accuracy target (absolute error). Series cutoffs are derived from
// it; each series documents its tail bound next to the cutoff computation.
struct TruncationBudget {
    double eps = 1e-12;

    TruncationBudget() = default;
    TruncationBudget(double e) : eps(e) {
        if (!(e > 0.0) || !std::isfinite(e))
            throw validation_error("TruncationBudget: eps must be positive and finite");
    }
};

}  // namespace horolab
