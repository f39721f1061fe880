#include "horolab/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

#include "horolab/detail/parallel.hpp"
#include "horolab/detail/quadrature.hpp"
#include "horolab/halfplane.hpp"

namespace horolab {

FareyFraction::FareyFraction(std::int64_t a_, std::int64_t c_) : a(a_), c(c_) {
    if (c < 1) throw validation_error("FareyFraction: c must be >= 1");
    if (std::gcd(std::abs(a), c) != 1) throw validation_error("FareyFraction: gcd(a, c) != 1");
    if (c > 1 && std::abs(a) >= c) throw validation_error("FareyFraction: need |a| < c");
}

namespace {

void stern_brocot(int a, int b, int c, int d, int q_max, std::vector<FareyFraction>& out) {
    // mediant of a/b and c/d
    const int mb = b + d;
    if (mb > q_max) return;
    const int ma = a + c;
    stern_brocot(a, b, ma, mb, q_max, out);
    out.emplace_back(ma, mb);
    stern_brocot(ma, mb, c, d, q_max, out);
}

}  // namespace

std::vector<FareyFraction> farey_sequence(int q_max) {
    if (q_max < 1) throw validation_error("farey_sequence: q_max must be >= 1");
    std::vector<FareyFraction> out;
    out.emplace_back(0, 1);
    stern_brocot(0, 1, 1, 1, q_max, out);
    return out;
}

namespace {

bool box_contains(const Box& u, const HPoint& p) {
    return p.x >= u.x_lo && p.x < u.x_hi && p.y >= u.y_lo && p.y < u.y_hi;
}

void require_box_in_domain(const Box& u, const char* who) {
    require_valid(u, who);
    // the half-open box must sit inside the closed fundamental domain
    const double x_edge = std::max(std::abs(u.x_lo), std::abs(u.x_hi));
    if (x_edge > 0.5 + kDomainTol)
        throw validation_error(std::string(who) + ": box not inside the fundamental domain");
    if (u.y_lo * u.y_lo + x_edge * x_edge < 1.0 - kDomainTol)
        throw validation_error(std::string(who) + ": box dips below the unit arc");
}

}  // namespace

double equidist_ratio(double y, const Box& u, std::int64_t n, int threads) {
    if (!(y > 0.0) || !std::isfinite(y)) throw validation_error("equidist_ratio: y must be > 0");
    if (n < 1) throw validation_error("equidist_ratio: n must be >= 1");
    require_box_in_domain(u, "equidist_ratio");

    const int nthreads = detail::resolve_threads(threads);
    std::vector<std::int64_t> counts(nthreads, 0);
    const std::int64_t chunk = (n + nthreads - 1) / nthreads;
    detail::parallel_for(nthreads, nthreads, [&](std::int64_t t) {
        std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
        std::int64_t local = 0;
        for (std::int64_t k = lo; k < hi; ++k) {
            HPoint p = reduce_to_fundamental({(k + 0.5) / double(n), y}).point;
            local += box_contains(u, p);
        }
        counts[size_t(t)] = local;
    });
    std::int64_t hits = 0;
    for (auto c : counts) hits += c;
    return double(hits) / double(n);
}

double equidist_exponent(const Box& u, const std::vector<double>& y_list, std::int64_t n,
                         bool* flagged, int threads) {
    if (y_list.size() < 4)
        throw validation_error("equidist_exponent: need >= 4 heights spanning decades");
    const double want = box_area(u) / (kPi / 3.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool floor_hit = false;
    int cnt = 0;
    for (double y : y_list) {
        double dev = std::abs(equidist_ratio(y, u, n, threads) - want);
        if (dev < 2.0 / double(n)) {
            floor_hit = true;  // below the midpoint discretization step
            continue;
        }
        double lx = std::log(y), ly = std::log(dev);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (flagged) *flagged = floor_hit || cnt < 3;
    if (cnt < 2) return 0.0;
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

std::vector<CuspProbePoint> cusp_probe(const ModularFunctionSpec& f, const FareyFraction& cusp,
                                       const std::vector<double>& y_list,
                                       TruncationBudget budget) {
    if (f.growth.kind != GrowthProfile::Kind::Exponential)
        throw validation_error("cusp_probe: exponential class (or j, exploratory) only");
    std::vector<CuspProbePoint> out;
    out.reserve(y_list.size());
    const double beta = f.growth.beta;
    const double c2 = double(cusp.c) * double(cusp.c);
    for (double y : y_list) {
        if (y < 1e-12) throw validation_error("cusp_probe: y below the precision floor");
        HPoint z{cusp.value(), y};
        double la = f.log_abs ? f.log_abs(z, budget.eps)
                              : std::log(std::abs(f.evaluator(z, budget.eps)));
        out.push_back({y, la, 2.0 * kPi * beta * c2 / y, kPi * beta / (c2 * y)});
    }
    return out;
}

double cusp_probe_slope(const std::vector<CuspProbePoint>& pts) {
    if (pts.size() < 2) throw validation_error("cusp_probe_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = int(pts.size());
    for (const auto& p : pts) {
        double x = 1.0 / p.y;
        sx += x;
        sy += p.log_abs_f;
        sxx += x * x;
        sxy += x * p.log_abs_f;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

cplx fourier_mode(const ModularFunctionSpec& f, int r, double y, TruncationBudget budget) {
    if (!(y > 0.0)) throw validation_error("fourier_mode: y must be > 0");
    const int n0 = std::max(32, 1 << int(std::ceil(std::log2(std::max(1.0, 8.0 / y)))));
    auto res = detail::periodic_mean(
        [&](double x) {
            return f.evaluator({x, y}, budget.eps * 0.1) *
                   std::exp(cplx(0.0, -2.0 * kPi * r * x));
        },
        budget.eps, n0);
    if (!res.converged) throw numeric_error("fourier_mode: quadrature not converged");
    return res.value;
}

}  // namespace horolab
