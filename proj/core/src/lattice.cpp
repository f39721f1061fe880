#include "horolab/lattice.hpp"

#include <cmath>
#include <numeric>

#include "horolab/detail/quadrature.hpp"
#include "horolab/halfplane.hpp"
#include "horolab/specialfn.hpp"

namespace horolab {

double theta1(double u, TruncationBudget budget) {
    if (!(u > 0.0) || !std::isfinite(u)) throw validation_error("theta1: u must be > 0");
    const double eps = budget.eps;
    double sum = 0.0;
    for (long n = 1;; ++n) {
        sum += std::exp(-kPi * u * double(n) * double(n));
        const double head = std::exp(-kPi * u * double(n + 1) * double(n + 1));
        const double ratio = std::exp(-kPi * u * double(2 * n + 3));
        if (head / (1.0 - ratio) <= eps) break;
        if (n > 100000000) throw numeric_error("theta1: budget unreachable");
    }
    return sum;
}

namespace {

// sum over n in Z of e^{-pi t ((n + a)^2)/y}, each term given the m-row
// prefactor outside; expands outward from the minimum until the geometric
// tail bound drops below thr.
double gaussian_row(double t, double y, double a, double thr) {
    const double c = kPi * t / y;
    const long n0 = lround(-a);
    double sum = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
        long n = (dir == 0) ? n0 : n0 - 1;
        const long step = (dir == 0) ? 1 : -1;
        for (long k = 0; k < 200000000; ++k, n += step) {
            const double w = n + a;
            const double term = std::exp(-c * w * w);
            sum += term;
            if (std::abs(w) >= 1.0) {
                // next terms shrink at least by e^{-c(2|w|-1)} each
                const double ratio = std::exp(-c * (2.0 * std::abs(w) - 1.0));
                if (ratio < 1.0 && term * ratio / (1.0 - ratio) <= thr) break;
            }
            if (k == 199999999) throw numeric_error("theta2: budget unreachable");
        }
    }
    return sum;
}

}  // namespace

double theta2(double t, const HPoint& z, TruncationBudget budget) {
    if (!(t > 0.0) || !std::isfinite(t)) throw validation_error("theta2: t must be > 0");
    require_valid(z, "theta2");
    const double eps = budget.eps;
    const HPoint w = reduce_to_fundamental(z).point;
    const double x = w.x, y = w.y;

    double total = 2.0 * theta1(t / y, TruncationBudget(eps / 4.0));

    // m-rows: 2 * e^{-pi t m^2 y} * sum_n e^{-pi t (n + m x)^2 / y}
    const double row_width = 1.0 + std::sqrt(y / t);  // sum_n <= 1 + integral
    for (long m = 1;; ++m) {
        const double lead = std::exp(-kPi * t * double(m) * double(m) * y);
        const double ratio = std::exp(-kPi * t * double(2 * m + 1) * y);
        if (ratio < 1.0 && 2.0 * lead * row_width / (1.0 - ratio) <= eps / 2.0) break;
        if (lead > 0.0)
            total += 2.0 * lead * gaussian_row(t, y, m * x, eps / (8.0 * row_width * m));
        if (m > 10000000) throw numeric_error("theta2: budget unreachable");
    }
    return total;
}

namespace detail_lattice {

namespace {

// int_{v0}^inf (v^2 + b^2)^{-s} dv, v0 > 0, Re(s) > 1/2; binomial expansion
// in (b/v)^2 beyond 2b, Gauss panel before that.
cplx tail_integral(double v0, double b, cplx s) {
    auto binomial_from = [&](double V) {
        cplx coef = 1.0;  // binom(-s, j)
        cplx sum = 0.0;
        double b2j = 1.0;
        for (int j = 0; j < 300; ++j) {
            cplx term = coef * b2j * std::pow(V, cplx(1.0) - 2.0 * s - double(2 * j)) /
                        (2.0 * s + double(2 * j) - 1.0);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) && j > 2) break;
            coef *= (-s - double(j)) / double(j + 1);
            b2j *= b * b;
        }
        return sum;
    };
    if (v0 >= 2.0 * b) return binomial_from(v0);
    const double V = 2.0 * b;
    cplx head = detail::gauss(
        [&](double v) { return std::pow(v * v + b * b, -s); }, v0, V, 40);
    return head + binomial_from(V);
}

// Euler-Maclaurin for sum_{j >= 0} g(v0 + j), g(v) = (v^2 + b^2)^{-s}.
cplx em_tail(double v0, double b, cplx s) {
    const double R = v0 * v0 + b * b;
    const cplx Rs1 = std::pow(R, -s - 1.0);
    const cplx Rs2 = Rs1 / R, Rs3 = Rs2 / R, Rs4 = Rs3 / R, Rs5 = Rs4 / R;
    const double t = v0, t3 = t * t * t, t5 = t3 * t * t;
    const cplx s1 = s, s2 = s * (s + 1.0), s3 = s2 * (s + 2.0), s4 = s3 * (s + 3.0),
               s5 = s4 * (s + 4.0);

    const cplx g0 = std::pow(R, -s);
    const cplx g1 = -2.0 * s1 * t * Rs1;
    const cplx g3 = 12.0 * s2 * t * Rs2 - 8.0 * s3 * t3 * Rs3;
    const cplx g5 = -120.0 * s3 * t * Rs3 + 160.0 * s4 * t3 * Rs4 - 32.0 * s5 * t5 * Rs5;

    return tail_integral(v0, b, s) + 0.5 * g0 - g1 / 12.0 + g3 / 720.0 - g5 / 30240.0;
}

}  // namespace

cplx epstein_row(double a, double b, cplx s) {
    const double W = std::max(8.0, 2.0 * std::abs(s) + 4.0);
    const long k_lo = long(std::ceil(-a - W));
    const long k_hi = long(std::floor(-a + W));
    cplx sum = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
        const double v = k + a;
        sum += std::pow(v * v + b * b, -s);
    }
    sum += em_tail(k_hi + 1 + a, b, s);   // k >= k_hi + 1
    sum += em_tail(-(k_lo - 1 + a), b, s);  // k <= k_lo - 1, mirrored
    return sum;
}

cplx eisenstein_direct_at(cplx s, const HPoint& z, double eps, bool reduce_first) {
    const HPoint w = reduce_first ? reduce_to_fundamental(z).point : z;
    const double x = w.x, y = w.y;

    // Row q deviates from its integral main term by O(e^{-2 pi q y})
    // (Poisson tail); the constant absorbs the |s|-dependent prefactor.
    const double C = 40.0 * (1.0 + std::abs(s));
    const double damp = 1.0 - std::exp(-2.0 * kPi * y);
    long Q0 = lround(std::ceil(std::log(3.0 * C / (eps * damp)) / (2.0 * kPi * y)));
    if (Q0 < 2) Q0 = 2;
    if (Q0 > 4000) throw numeric_error("eisenstein_direct: budget unreachable at this height");

    cplx G = 0.0;
    for (long q = 1; q <= Q0; ++q) G += epstein_row(q * x, q * y, s);
    const cplx main_coef = std::sqrt(kPi) * gamma_fn(s - 0.5) / gamma_fn(s);
    G += main_coef * std::pow(y, cplx(1.0) - 2.0 * s) * hurwitz_zeta(2.0 * s - 1.0, double(Q0 + 1));

    return std::pow(y, s) * (1.0 + G / zeta_fn(2.0 * s));
}

cplx eisenstein_naive(cplx s, const HPoint& z, double eps) {
    const double sigma = s.real();
    if (sigma < 1.0 + kEisensteinMargin)
        throw validation_error("eisenstein_naive: Re(s) too close to 1");
    const double x = z.x, y = z.y;

    // coprime-row tail <= K C^{2-2s}/(2s-2), K from the full-lattice comparison
    const double K = std::sqrt(kPi) * std::tgamma(sigma - 0.5) / std::tgamma(sigma) *
                     std::pow(y, 1.0 - sigma);
    double C = std::pow(K / ((2.0 * sigma - 2.0) * (eps / 2.0)), 1.0 / (2.0 * sigma - 2.0));
    if (!(C >= 1.0)) C = 1.0;
    if (C > 5e4) throw numeric_error("eisenstein_naive: budget unreachable, use eisenstein_direct");
    const long rows = long(std::ceil(C));

    const cplx ys = std::pow(y, s);
    cplx total = ys;  // (c,d) = (0, +-1)
    const double eps_row = eps / (2.0 * rows);
    for (long c = 1; c <= rows; ++c) {
        cplx row = 0.0;
        const double cy = c * y;
        const long d0 = lround(-c * x);
        for (int dir = 0; dir < 2; ++dir) {
            long d = (dir == 0) ? d0 : d0 - 1;
            const long step = (dir == 0) ? 1 : -1;
            while (true) {
                const double u = c * x + d;
                const double q = u * u + cy * cy;
                if (std::gcd(c, std::abs(d)) == 1) row += std::pow(q, -s);
                const double wdist = std::abs(u);
                if (wdist > std::max(1.0, cy)) {
                    // remaining d on this side <= int: 2 w^{1-2s}/(2s-1)
                    if (std::pow(wdist, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0) <= eps_row)
                        break;
                }
                d += step;
            }
        }
        total += ys * row;
    }
    return total;
}

}  // namespace detail_lattice

cplx eisenstein_direct(cplx s, const HPoint& z, TruncationBudget budget) {
    require_valid(z, "eisenstein_direct");
    if (s.real() < 1.0 + kEisensteinMargin)
        throw validation_error(
            "eisenstein_direct: Re(s) < 1 + margin, use eisenstein_star");
    return detail_lattice::eisenstein_direct_at(s, z, budget.eps, true);
}

cplx eisenstein_star(cplx s, const HPoint& z, TruncationBudget budget) {
    require_valid(z, "eisenstein_star");
    if (std::abs(s) < 1e-12) throw pole_error("E* pole at s = 0", s, -0.5);
    if (std::abs(s - 1.0) < 1e-12) throw pole_error("E* pole at s = 1", s, 0.5);

    const double eps = budget.eps;
    const HPoint w = reduce_to_fundamental(z).point;
    const double x = w.x, y = w.y;
    const double sigma = s.real();
    // |g(Q)| <= 4 e^{-pi Q}/(pi Q) once pi Q >= 2 max(sigma, 1-sigma) + 2
    const double safe_piq = 2.0 * std::max({sigma, 1.0 - sigma, 1.0}) + 2.0;

    auto term = [&](double m, double n) {
        const double u = m * x + n;
        const double Q = (u * u + m * m * y * y) / y;
        const double piq = kPi * Q;
        return std::pow(piq, -s) * upper_incomplete_gamma(s, piq) +
               std::pow(piq, s - 1.0) * upper_incomplete_gamma(1.0 - s, piq);
    };
    auto bound = [&](double Q) {
        const double piq = kPi * Q;
        if (piq < safe_piq) return 1e300;
        return 4.0 * std::exp(-piq) / piq;
    };

    cplx lat = 0.0;
    // m = 0 row: n >= 1 doubled, Q = n^2 / y
    for (long n = 1;; ++n) {
        lat += 2.0 * term(0.0, double(n));
        const double Qn = double(n + 1) * double(n + 1) / y;
        if (bound(Qn) * 3.0 <= eps / 4.0) break;
        if (n > 2000000) throw numeric_error("eisenstein_star: budget unreachable");
    }
    // m >= 1 rows doubled
    for (long m = 1;; ++m) {
        const double Qrow = m * m * y;  // row minimum of Q
        if (bound(Qrow) * 3.0 * (1.0 + std::sqrt(y)) / std::max(1e-3, 1.0 - std::exp(-kPi * (2 * m + 1) * y)) <= eps / 4.0)
            break;
        const long n0 = lround(-m * x);
        for (int dir = 0; dir < 2; ++dir) {
            long n = (dir == 0) ? n0 : n0 - 1;
            const long step = (dir == 0) ? 1 : -1;
            while (true) {
                lat += 2.0 * term(double(m), double(n));
                const double un = m * x + (n + step);
                const double Qn = (un * un + m * m * y * y) / y;
                if (std::abs(un) >= 1.0 && bound(Qn) * 3.0 <= eps / 8.0) break;
                n += step;
                if (std::abs(n) > 2000000) throw numeric_error("eisenstein_star: budget unreachable");
            }
        }
        if (m > 2000000) throw numeric_error("eisenstein_star: budget unreachable");
    }

    return 0.5 * (-1.0 / s + 1.0 / (s - 1.0) + lat);
}

}  // namespace horolab
