#pragma once

// Minimal double-double (compensated) arithmetic: an unevaluated sum hi + lo
// with |lo| <= ulp(hi)/2. Used where |cz+d|^2 cancels catastrophically, i.e.
// Mobius arithmetic at very small heights. Only the handful of operations the
// reduction path needs are provided.

#include <cmath>

namespace horolab::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

// Error-free sum of two doubles (Knuth two-sum).
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Error-free product via FMA.
inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline dd add(dd a, double b) { return add(a, dd(b)); }

inline dd sub(dd a, dd b) { return add(a, dd(-b.hi, -b.lo)); }

inline dd mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline dd mul(dd a, double b) { return mul(a, dd(b)); }

inline dd div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = sub(a, mul(b, q1));
    double q2 = r.hi / b.hi;
    r = sub(r, mul(b, q2));
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return add(q, q3);
}

}  // namespace horolab::detail
