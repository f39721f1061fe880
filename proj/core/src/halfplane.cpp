#include "horolab/halfplane.hpp"

#include <cmath>

#include "horolab/detail/dd.hpp"
#include "horolab/detail/parallel.hpp"

namespace horolab {

namespace {

std::int64_t mul_add_checked(std::int64_t a, std::int64_t b, std::int64_t c,
                             std::int64_t d) {
    std::int64_t p1, p2, s;
    if (__builtin_mul_overflow(a, b, &p1) || __builtin_mul_overflow(c, d, &p2) ||
        __builtin_add_overflow(p1, p2, &s))
        throw numeric_error("UniMatrix: entry overflow in product");
    return s;
}

}  // namespace

UniMatrix UniMatrix::operator*(const UniMatrix& o) const {
    UniMatrix r;
    r.a = mul_add_checked(a, o.a, b, o.c);
    r.b = mul_add_checked(a, o.b, b, o.d);
    r.c = mul_add_checked(c, o.a, d, o.c);
    r.d = mul_add_checked(c, o.b, d, o.d);
    return r;
}

HPoint mobius_apply(const UniMatrix& m, const HPoint& z) {
    require_unimodular(m, "mobius_apply");
    require_valid(z, "mobius_apply");

    const double a = double(m.a), b = double(m.b), c = double(m.c), d = double(m.d);
    HPoint out;
    if (z.y >= kCompensatedFloor) {
        const double u = c * z.x + d;
        const double v = c * z.y;
        const double den = u * u + v * v;
        out.y = z.y / den;
        out.x = ((a * z.x + b) * u + a * c * z.y * z.y) / den;
    } else {
        // |cz+d|^2 cancels near rationals; double-double keeps ~2x digits.
        using namespace detail;
        const dd u = add(two_prod(c, z.x), d);
        const dd v = two_prod(c, z.y);
        const dd den = add(mul(u, u), mul(v, v));
        out.y = div(dd(z.y), den).value();
        const dd num = add(mul(add(two_prod(a, z.x), b), u),
                           mul(mul(two_prod(a, c), z.y), z.y));
        out.x = div(num, den).value();
    }
    if (!out.valid())
        throw numeric_error("mobius_apply: result below precision floor");
    return out;
}

bool in_fundamental_domain(const HPoint& z, double tol) noexcept {
    return std::abs(z.x) <= 0.5 + tol && z.x * z.x + z.y * z.y >= 1.0 - tol;
}

ReductionResult reduce_to_fundamental(HPoint z) {
    require_valid(z, "reduce_to_fundamental");
    if (std::abs(z.x) > 4e15)
        throw numeric_error("reduce_to_fundamental: |x| too large for exact translation");

    static const UniMatrix S = UniMatrix::inversion();
    ReductionResult res;
    res.point = z;

    for (int iter = 0; iter < kReduceIterCap; ++iter) {
        double n = std::floor(res.point.x + 0.5);  // x - n lands in [-1/2, 1/2)
        if (n != 0.0) {
            res.matrix = UniMatrix::translation(-std::int64_t(n)) * res.matrix;
            res.point.x -= n;
        }
        const double norm = res.point.x * res.point.x + res.point.y * res.point.y;
        if (norm < 1.0 - kDomainTol) {
            res.point = mobius_apply(S, res.point);
            res.matrix = S * res.matrix;
            ++res.steps;
            continue;
        }
        if (norm <= 1.0 + kDomainTol && res.point.x > kDomainTol) {
            // On the unit arc keep the x <= 0 representative.
            res.point = mobius_apply(S, res.point);
            res.matrix = S * res.matrix;
            ++res.steps;
        }
        return res;
    }
    throw numeric_error("reduce_to_fundamental: iteration cap exceeded at x=" +
                        std::to_string(res.point.x) + " y=" + std::to_string(res.point.y));
}

double box_area(const Box& u) {
    require_valid(u, "box_area");
    const double inv_hi = std::isinf(u.y_hi) ? 0.0 : 1.0 / u.y_hi;
    return (u.x_hi - u.x_lo) * (1.0 / u.y_lo - inv_hi);
}

std::vector<ReductionResult> horocycle_image(double y, std::int64_t n, int threads) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw validation_error("horocycle_image: y must be > 0");
    if (n < 1) throw validation_error("horocycle_image: n must be >= 1");

    std::vector<ReductionResult> out(static_cast<size_t>(n));
    detail::parallel_for(n, threads, [&](std::int64_t k) {
        // midpoints dodge the rational cusps exactly at k/n
        out[size_t(k)] = reduce_to_fundamental({(k + 0.5) / double(n), y});
    });
    return out;
}

}  // namespace horolab
