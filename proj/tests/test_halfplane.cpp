#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/halfplane.hpp"

using namespace horolab;

namespace {

double dist(const HPoint& a, const HPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// random word in T^k and S with entries kept small
UniMatrix random_word(std::mt19937& rng, int len) {
    std::uniform_int_distribution<int> shift(-3, 3);
    std::bernoulli_distribution flip(0.5);
    UniMatrix m = UniMatrix::identity();
    for (int i = 0; i < len; ++i) {
        m = UniMatrix::translation(shift(rng)) * m;
        if (flip(rng)) m = UniMatrix::inversion() * m;
    }
    return m;
}

}  // namespace

TEST_CASE("mobius_apply worked examples") {
    // inversion fixes i
    HPoint p = mobius_apply(UniMatrix::inversion(), {0.0, 1.0});
    CHECK(dist(p, {0.0, 1.0}) < 1e-15);
    // unit translation
    p = mobius_apply(UniMatrix::translation(1), {0.2, 0.3});
    CHECK(dist(p, {1.2, 0.3}) < 1e-15);
    // (2z+1)/(z+1) at z=i equals (3+i)/2
    p = mobius_apply({2, 1, 1, 1}, {0.0, 1.0});
    CHECK(dist(p, {1.5, 0.5}) < 1e-15);
}

TEST_CASE("mobius_apply rejects non-unimodular input") {
    CHECK_THROWS_AS(mobius_apply({2, 0, 0, 1}, {0.0, 1.0}), validation_error);
    CHECK_THROWS_AS(mobius_apply({1, 0, 0, 1}, {0.0, -1.0}), validation_error);
}

TEST_CASE("height transformation identity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.05, 8.0);
    for (int it = 0; it < 200; ++it) {
        UniMatrix m = random_word(rng, 6);
        HPoint z{ux(rng), uy(rng)};
        HPoint w = mobius_apply(m, z);
        double den = std::pow(double(m.c) * z.x + double(m.d), 2) +
                     std::pow(double(m.c) * z.y, 2);
        CHECK(std::abs(w.y * den - z.y) <= 1e-12 * z.y);
    }
}

TEST_CASE("reduction worked examples") {
    auto r = reduce_to_fundamental({1.0, 1.0});
    CHECK(dist(r.point, {0.0, 1.0}) < 1e-14);
    CHECK(r.matrix == UniMatrix::translation(-1));

    // -1/(0.3+0.4i) = -1.2+1.6i, then one translation
    r = reduce_to_fundamental({0.3, 0.4});
    CHECK(dist(r.point, {-0.2, 1.6}) < 1e-12);

    r = reduce_to_fundamental({0.1, 2.0});
    CHECK(dist(r.point, {0.1, 2.0}) == 0.0);
    CHECK(r.matrix.is_identity());
    CHECK(r.steps == 0);
}

TEST_CASE("reduction boundary ties") {
    // x = +1/2 maps to -1/2
    auto r = reduce_to_fundamental({0.5, 2.0});
    CHECK(r.point.x == doctest::Approx(-0.5).epsilon(1e-12));
    // on the unit arc keep x <= 0
    double th = 80.0 * kPi / 180.0;
    r = reduce_to_fundamental({std::cos(th), std::sin(th)});
    CHECK(r.point.x <= kDomainTol);
    CHECK(std::abs(r.point.x + std::cos(th)) < 1e-12);
}

TEST_CASE("reduction output satisfies its contract") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-8.0, 8.0);
    std::uniform_real_distribution<double> uy(1e-4, 5.0);
    for (int it = 0; it < 500; ++it) {
        HPoint z{ux(rng), uy(rng)};
        auto r = reduce_to_fundamental(z);
        CHECK(in_fundamental_domain(r.point));
        CHECK(r.matrix.det() == 1);
        CHECK(dist(mobius_apply(r.matrix, z), r.point) < 1e-9);
        // idempotent with identity matrix
        auto r2 = reduce_to_fundamental(r.point);
        CHECK(r2.matrix.is_identity());
        CHECK(dist(r2.point, r.point) == 0.0);
    }
}

TEST_CASE("orbit invariance of the reduced representative") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ux(-0.45, 0.45), uy(0.2, 3.0);
    int checked = 0;
    for (int it = 0; it < 300; ++it) {
        HPoint z{ux(rng), uy(rng)};
        auto base = reduce_to_fundamental(z);
        // skip orbit representatives too close to the domain boundary
        if (std::abs(std::abs(base.point.x) - 0.5) < 1e-6) continue;
        if (std::abs(base.point.x * base.point.x + base.point.y * base.point.y - 1.0) < 1e-6)
            continue;
        UniMatrix m = random_word(rng, 8);
        auto moved = reduce_to_fundamental(mobius_apply(m, z));
        CHECK(dist(moved.point, base.point) < 1e-10);
        ++checked;
    }
    CHECK(checked > 200);
}

TEST_CASE("box_area") {
    CHECK(box_area({0.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(box_area({0.1, 0.4, 1.2, 2.0}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(box_area({0.4, 0.1, 1.2, 2.0}), validation_error);
}

TEST_CASE("horocycle_image high line needs no inversions") {
    auto pts = horocycle_image(2.0, 4);
    REQUIRE(pts.size() == 4);
    for (int k = 0; k < 4; ++k) {
        // above the domain floor only the canonical x-translation acts
        CHECK(pts[k].steps == 0);
        CHECK(pts[k].matrix.c == 0);
        CHECK(pts[k].point.y == doctest::Approx(2.0));
        double want = std::remainder((k + 0.5) / 4.0, 1.0);
        CHECK(pts[k].point.x == doctest::Approx(want));
    }
}

TEST_CASE("horocycle_image fills the domain") {
    auto pts = horocycle_image(1.0 / 8.0, 1000);
    double y_min = 1e9, y_max = 0.0;
    for (const auto& r : pts) {
        CHECK(in_fundamental_domain(r.point));
        y_min = std::min(y_min, r.point.y);
        y_max = std::max(y_max, r.point.y);
    }
    // qualitative Figure-1 spread: reaches the floor and climbs the cusp
    CHECK(y_min < 1.0);
    CHECK(y_max > 4.0);
    int low = 0;
    for (const auto& r : pts) low += r.point.y < 1.5;
    CHECK(low > 200);
}

TEST_CASE("horocycle_image box occupancy approaches the area ratio") {
    const Box u{0.1, 0.4, 1.2, 2.0};
    const double want = box_area(u) / (kPi / 3.0);
    auto pts = horocycle_image(1e-4, 100000);
    long hits = 0;
    for (const auto& r : pts)
        hits += (r.point.x >= u.x_lo && r.point.x < u.x_hi && r.point.y >= u.y_lo &&
                 r.point.y < u.y_hi);
    double ratio = double(hits) / double(pts.size());
    CHECK(std::abs(ratio - want) < 0.02 * want);
}

TEST_CASE("horocycle_image is thread-count independent") {
    auto a = horocycle_image(0.01, 5000, 1);
    auto b = horocycle_image(0.01, 5000, 4);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].point.x == b[i].point.x);
        CHECK(a[i].point.y == b[i].point.y);
    }
}
