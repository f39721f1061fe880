#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/halfplane.hpp"
#include "horolab/lattice.hpp"
#include "horolab/specialfn.hpp"

using namespace horolab;

namespace {

double rel(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// brute-force theta lattice sum over a square window
double theta2_brute(double t, double x, double y, int window) {
    double sum = 0.0;
    for (int m = -window; m <= window; ++m)
        for (int n = -window; n <= window; ++n) {
            if (m == 0 && n == 0) continue;
            double u = m * x + n;
            sum += std::exp(-kPi * t * (u * u + m * m * y * y) / y);
        }
    return sum;
}

}  // namespace

TEST_CASE("theta1 against direct summation") {
    // u = 1: all mass in the first few terms
    double brute = 0.0;
    for (int n = 6; n >= 1; --n) brute += std::exp(-kPi * n * n);
    CHECK(std::abs(theta1(1.0, TruncationBudget(1e-16)) - brute) < 1e-14);
    // u = 10: single-term dominance
    CHECK(rel(theta1(10.0), std::exp(-10.0 * kPi)) < 1e-13);
    CHECK_THROWS_AS(theta1(-1.0), validation_error);
}

TEST_CASE("theta1 one-dimensional Poisson summation") {
    double lhs = 1.0 + 2.0 * theta1(4.0, TruncationBudget(1e-14));
    double rhs = 0.5 * (1.0 + 2.0 * theta1(0.25, TruncationBudget(1e-14)));
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("theta1 stability under budget halving") {
    for (double u : {0.03, 0.7, 3.0}) {
        double a = theta1(u, TruncationBudget(1e-8));
        double b = theta1(u, TruncationBudget(5e-9));
        CHECK(std::abs(a - b) <= 1e-8);
    }
}

TEST_CASE("theta2 against direct summation at z = i") {
    double got = theta2(1.0, {0.0, 1.0}, TruncationBudget(1e-13));
    CHECK(std::abs(got - theta2_brute(1.0, 0.0, 1.0, 8)) < 1e-12);
    // spec-level digits
    CHECK(got == doctest::Approx(0.180340).epsilon(1e-4));
}

TEST_CASE("theta2 functional equation") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.87, 2.5);
    for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        for (int k = 0; k < 4; ++k) {
            HPoint z = reduce_to_fundamental({ux(rng), uy(rng)}).point;
            TruncationBudget tight(1e-12);
            double lhs = theta2(t, z, tight);
            double rhs = -1.0 + 1.0 / t + theta2(1.0 / t, z, tight) / t;
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("theta2 reduces to twice theta1 high in the cusp") {
    double got = theta2(1.0, {0.3, 40.0}, TruncationBudget(1e-13));
    CHECK(std::abs(got - 2.0 * theta1(1.0 / 40.0, TruncationBudget(1e-14))) < 1e-13);
}

TEST_CASE("theta2 is modular invariant") {
    HPoint z{0.21, 1.3};
    UniMatrix g = UniMatrix::inversion() * UniMatrix::translation(2);
    double a = theta2(0.8, z, TruncationBudget(1e-11));
    double b = theta2(0.8, mobius_apply(g, z), TruncationBudget(1e-11));
    CHECK(std::abs(a - b) < 2e-11);
}

TEST_CASE("theta2 signals unreachable budgets") {
    CHECK_THROWS_AS(theta2(1e-300, {0.0, 1.0}), numeric_error);
}

TEST_CASE("epstein row sums against brute force") {
    const cplx s(1.7, 0.4);
    for (double a : {0.3, -1.7}) {
        for (double b : {0.9, 17.0}) {
            cplx brute = 0.0;
            for (long k = 120000; k >= -120000; --k) {
                double v = k + a;
                brute += std::pow(cplx(v * v + b * b), -s);
            }
            CHECK(std::abs(detail_lattice::epstein_row(a, b, s) - brute) < 1e-9);
        }
    }
}

TEST_CASE("eisenstein translation and inversion invariance without reduction") {
    const cplx s(1.5);
    const double eps = 1e-12;
    HPoint z{0.2, 0.9};
    cplx e0 = detail_lattice::eisenstein_direct_at(s, z, eps, false);
    cplx e1 = detail_lattice::eisenstein_direct_at(s, {z.x + 1.0, z.y}, eps, false);
    CHECK(rel(e0, e1) < 1e-11);

    HPoint w{0.3, 1.1};
    double den = w.x * w.x + w.y * w.y;
    HPoint winv{-w.x / den, w.y / den};
    cplx a = detail_lattice::eisenstein_direct_at(s, w, eps, false);
    cplx b = detail_lattice::eisenstein_direct_at(s, winv, eps, false);
    CHECK(rel(a, b) < 2e-11);
}

TEST_CASE("accelerated eisenstein matches the gcd-per-pair reference") {
    for (cplx s : {cplx(2.0), cplx(1.8, 0.5)}) {
        HPoint z{0.0, 1.0};
        cplx fast = eisenstein_direct(s, z, TruncationBudget(1e-9));
        cplx naive = detail_lattice::eisenstein_naive(s, z, 1e-5);
        CHECK(std::abs(fast - naive) < 3e-5);
    }
}

TEST_CASE("eisenstein refuses Re(s) near 1") {
    CHECK_THROWS_AS(eisenstein_direct(cplx(1.02), {0.0, 1.0}), validation_error);
}

TEST_CASE("eisenstein_star coherence with the direct series") {
    // zeta*(2s) E_s == E*_s, independent evaluation routes
    for (cplx s : {cplx(1.5), cplx(1.2), cplx(2.0), cplx(1.4, 0.3)}) {
        for (HPoint z : {HPoint{0.0, 1.0}, HPoint{-0.37, 1.21}}) {
            cplx lhs = zeta_star(2.0 * s) * eisenstein_direct(s, z, TruncationBudget(1e-12));
            cplx rhs = eisenstein_star(s, z, TruncationBudget(1e-12));
            CHECK(rel(lhs, rhs) < 1e-9);
        }
    }
}

TEST_CASE("eisenstein_star s <-> 1-s symmetry") {
    HPoint z{0.28, 1.2};
    TruncationBudget tight(1e-13);
    cplx a = eisenstein_star(cplx(0.3), z, tight);
    cplx b = eisenstein_star(cplx(0.7), z, tight);
    CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
    cplx c = eisenstein_star(cplx(0.25, 1.4), z, tight);
    cplx d = eisenstein_star(cplx(0.75, -1.4), z, tight);
    CHECK(std::abs(c - d) < 1e-10 * std::abs(c));
}

TEST_CASE("eisenstein_star pole structure") {
    try {
        eisenstein_star(cplx(1.0), {0.0, 1.0});
        CHECK(false);
    } catch (const pole_error& p) {
        CHECK(std::abs(p.residue - cplx(0.5)) < 1e-14);
    }
    try {
        eisenstein_star(cplx(0.0), {0.0, 1.0});
        CHECK(false);
    } catch (const pole_error& p) {
        CHECK(std::abs(p.residue - cplx(-0.5)) < 1e-14);
    }
    // (s-1) E*_s -> 1/2 approaching the pole
    cplx s(1.0 + 1e-6);
    cplx v = (s - 1.0) * eisenstein_star(s, {0.0, 1.0}, TruncationBudget(1e-11));
    CHECK(std::abs(v - cplx(0.5)) < 1e-4);
}

TEST_CASE("eisenstein_star stability under budget halving") {
    HPoint z{0.11, 0.95};
    for (cplx s : {cplx(1.5), cplx(0.3)}) {
        cplx a = eisenstein_star(s, z, TruncationBudget(1e-8));
        cplx b = eisenstein_star(s, z, TruncationBudget(5e-9));
        CHECK(std::abs(a - b) <= 1e-8);
    }
}

TEST_CASE("constant term of E_s high in the cusp") {
    // int_0^1 E_s(x + iy) dx = y^s + (zeta*(2s-1)/zeta*(2s)) y^{1-s} exactly
    const cplx s(1.5);
    const double y = 30.0;
    const int N = 64;
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j)
        acc += eisenstein_direct(s, {(j + 0.5) / N - 0.5, y}, TruncationBudget(1e-12));
    acc /= N;
    cplx want = std::pow(y, s) + zeta_star(2.0 * s - 1.0) / zeta_star(2.0 * s) *
                                     std::pow(y, 1.0 - s);
    CHECK(rel(acc, want) < 1e-8);
}
