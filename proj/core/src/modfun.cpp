#include "horolab/modfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "horolab/detail/quadrature.hpp"
#include "horolab/halfplane.hpp"
#include "horolab/lattice.hpp"
#include "horolab/specialfn.hpp"

namespace horolab {

// ---------------------------------------------------------------------------
// growth profiles
// ---------------------------------------------------------------------------

GrowthProfile GrowthProfile::rapid_decay() { return {}; }

GrowthProfile GrowthProfile::polynomial(std::vector<PolyTerm> terms) {
    for (const auto& t : terms)
        if (t.alpha.real() >= 0.5 || t.n < 0)
            throw validation_error("GrowthProfile: polynomial terms need Re(alpha) < 1/2");
    GrowthProfile g;
    g.kind = Kind::Polynomial;
    g.terms = std::move(terms);
    return g;
}

GrowthProfile GrowthProfile::exponential(cplx alpha, double beta, int kappa) {
    if (beta >= 1.0) throw validation_error("GrowthProfile: exponential class needs beta < 1");
    if (kappa == 0) throw validation_error("GrowthProfile: exponential class needs kappa != 0");
    if (alpha.real() >= 0.5)
        throw validation_error("GrowthProfile: exponential class needs Re(alpha) < 1/2");
    GrowthProfile g;
    g.kind = Kind::Exponential;
    g.alpha = alpha;
    g.beta = beta;
    g.kappa = kappa;
    return g;
}

// ---------------------------------------------------------------------------
// q-expansion oracles
// ---------------------------------------------------------------------------

namespace {

// coefficients of prod_{n>=1} (1 - q^n)^24 up to degree deg. Built from the
// sparse eta^3 series (Jacobi) by three squarings: every intermediate is a
// true eta-power coefficient array, so nothing blows up and cancels. The
// naive 24-fold truncated product is numerically catastrophic at high degree.
std::vector<double> eta24_coeffs(int deg) {
    std::vector<double> e3(deg + 1, 0.0);
    for (long k = 0;; ++k) {
        long idx = k * (k + 1) / 2;
        if (idx > deg) break;
        e3[idx] = ((k % 2) ? -1.0 : 1.0) * double(2 * k + 1);
    }
    auto square = [deg](const std::vector<double>& a) {
        std::vector<double> c(deg + 1, 0.0);
        for (int i = 0; i <= deg; ++i) {
            if (a[i] == 0.0) continue;
            for (int j = 0; i + j <= deg; ++j) c[i + j] += a[i] * a[j];
        }
        return c;
    };
    return square(square(square(e3)));
}

std::mutex g_tau_mutex;
std::vector<double> g_tau;  // g_tau[n] = tau(n), g_tau[0] = 0

std::vector<double> tau_table_at_least(int n_max) {
    std::lock_guard<std::mutex> lk(g_tau_mutex);
    if (int(g_tau.size()) <= n_max) {
        int deg = std::max(64, n_max + 1);
        auto p = eta24_coeffs(deg);
        g_tau.assign(deg + 1, 0.0);
        for (int n = 1; n <= deg; ++n) g_tau[n] = p[n - 1];  // Delta = q * prod
    }
    return g_tau;
}

}  // namespace

std::vector<double> ramanujan_tau(int n_max) {
    auto t = tau_table_at_least(n_max);
    t.resize(n_max + 1);
    return t;
}

std::vector<double> j_coefficients(int n_max) {
    const int deg = n_max + 2;
    auto delta_shift = eta24_coeffs(deg);  // Delta/q
    // E4 = 1 + 240 sum sigma_3(n) q^n
    std::vector<double> e4(deg + 1, 0.0);
    e4[0] = 1.0;
    for (int n = 1; n <= deg; ++n) {
        double s3 = 0.0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s3 += double(d) * d * d;
        e4[n] = 240.0 * s3;
    }
    auto mul = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> c(deg + 1, 0.0);
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    auto e8 = mul(e4, e4);
    auto e12 = mul(e8, e4);
    // inverse of Delta/q
    std::vector<double> inv(deg + 1, 0.0);
    inv[0] = 1.0;
    for (int m = 1; m <= deg; ++m) {
        double acc = 0.0;
        for (int k = 1; k <= m; ++k) acc += delta_shift[k] * inv[m - k];
        inv[m] = -acc;
    }
    auto j = mul(e12, inv);  // j = q^{-1} (E4^3) (Delta/q)^{-1}
    // v[k] = coefficient of q^{k-1}
    j.resize(n_max + 2);
    return j;
}

// ---------------------------------------------------------------------------
// multiplicative helpers (lazy smallest-prime-factor sieve)
// ---------------------------------------------------------------------------

namespace {

std::mutex g_spf_mutex;
std::vector<int> g_spf;

void spf_ensure(int n) {
    std::lock_guard<std::mutex> lk(g_spf_mutex);
    if (int(g_spf.size()) > n) return;
    int cap = std::max(4096, 2 * n);
    g_spf.assign(cap, 0);
    for (int i = 2; i < cap; ++i)
        if (g_spf[i] == 0)
            for (long j = i; j < cap; j += i)
                if (g_spf[j] == 0) g_spf[j] = i;
}

long totient(int n) {
    if (n <= 1) return 1;
    spf_ensure(n);
    long r = n;
    int m = n;
    while (m > 1) {
        int p = g_spf[m];
        r = r / p * (p - 1);
        while (m % p == 0) m /= p;
    }
    return r;
}

int moebius(int n) {
    if (n <= 1) return 1;
    spf_ensure(n);
    int cnt = 0, m = n;
    while (m > 1) {
        int p = g_spf[m];
        m /= p;
        if (m % p == 0) return 0;
        ++cnt;
    }
    return (cnt % 2) ? -1 : 1;
}

// Ramanujan sum c_c(k) = mu(c/g) phi(c)/phi(c/g), g = gcd(c,k); c_c(0) = phi(c)
double ramanujan_sum(int c, int k) {
    if (c == 1) return 1.0;
    if (k == 0) return double(totient(c));
    int g = std::gcd(c, std::abs(k));
    int m = c / g;
    int mu = moebius(m);
    if (mu == 0) return 0.0;
    return double(mu) * double(totient(c)) / double(totient(m));
}

long mod_inverse(long d, long c) {
    long t = 0, newt = 1, r = c, newr = ((d % c) + c) % c;
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    return ((t % c) + c) % c;
}

// sum over divisors d | kappa of d^{1-w}
double sigma_power(int kappa, double w) {
    kappa = std::abs(kappa);
    double s = 0.0;
    for (int d = 1; d <= kappa; ++d)
        if (kappa % d == 0) s += std::pow(double(d), 1.0 - w);
    return s;
}

// sum_{c>=1} c_c(kappa) c^{-w}: sigma_{1-w}(kappa)/zeta(w); phi-series for kappa = 0
double ramanujan_dirichlet_full_impl(int kappa, double w) {
    const double zw = zeta_fn(cplx(w)).real();
    if (kappa == 0) return zeta_fn(cplx(w - 1.0)).real() / zw;
    return sigma_power(kappa, w) / zw;
}

// eta_j = int v^j (1+v^2)^{-2-j} dv for even j (Beta closed form)
double eta_even(int j) {
    int m = j / 2;
    return std::exp(std::lgamma(m + 0.5) + std::lgamma(m + 1.5) - std::lgamma(2.0 * m + 2.0));
}

// ---------------------------------------------------------------------------
// oscillatory tails int_V^inf v^j (1+v^2)^{-2-j} e^{-i omega v} dv
// ---------------------------------------------------------------------------

using TermList = std::map<std::pair<int, int>, double>;  // coef * v^m (1+v^2)^{-p}

TermList differentiate(const TermList& h) {
    TermList out;
    for (const auto& [mp, coef] : h) {
        const int m = mp.first, p = mp.second;
        if (m >= 1) out[{m - 1, p}] += coef * m;
        out[{m + 1, p + 1}] += -2.0 * p * coef;
    }
    return out;
}

double eval_terms(const TermList& h, double v) {
    double acc = 0.0;
    const double l1 = std::log(v), l2 = std::log1p(v * v);
    for (const auto& [mp, coef] : h)
        acc += coef * std::exp(mp.first * l1 - mp.second * l2);
    return acc;
}

cplx osc_tail(int j, double V, double omega) {
    if (omega == 0.0) {
        double sum = 0.0, coef = 1.0;  // binom(-(2+j), m)
        for (int m = 0; m < 200; ++m) {
            double term = coef * std::pow(V, -(3.0 + j + 2.0 * m)) / (3.0 + j + 2.0 * m);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) && m > 1) break;
            coef *= -(2.0 + j + m) / (m + 1.0);
        }
        return sum;
    }
    TermList h{{{j, 2 + j}, 1.0}};
    const cplx iw(0.0, omega);
    cplx acc = 0.0, pw = iw;
    for (int k = 0; k < 22; ++k) {
        cplx term = eval_terms(h, V) / pw;
        acc += term;
        if (std::abs(term) < 1e-18 * std::max(1e-60, std::abs(acc)) && k > 2) break;
        h = differentiate(h);
        pw *= iw;
    }
    return std::exp(cplx(0.0, -omega * V)) * acc;
}

// mu_j(tau) = int_R v^j (1+v^2)^{-2-j} e^{-2 pi i tau v} dv
cplx mu_integral(int j, double tau, double eps) {
    if (tau == 0.0) return (j % 2) ? 0.0 : eta_even(j);
    // analytic integrand with poles at +-i: |mu_j| <~ poly * e^{-2 pi |tau|}
    if (2.0 * kPi * std::abs(tau) > 44.0) return 0.0;
    const double V = 10.0;
    const double omega = 2.0 * kPi * tau;
    cplx head = detail::adaptive_gauss(
        [&](double v) {
            return std::pow(v, double(j)) * std::pow(1.0 + v * v, -(2.0 + j)) *
                   std::exp(cplx(0.0, -omega * v));
        },
        -V, V, eps);
    const double sgn = (j % 2) ? -1.0 : 1.0;
    return head + osc_tail(j, V, omega) + sgn * osc_tail(j, V, -omega);
}

// ---------------------------------------------------------------------------
// Kloosterman Dirichlet partial sums
// ---------------------------------------------------------------------------

// S(kappa, r; c) = sum_{d mod c, (d,c)=1} e^{2 pi i (kappa dbar + r d)/c}
cplx kloosterman(int kappa, int r, int c) {
    if (c == 1) return 1.0;
    if (kappa == 0) return ramanujan_sum(c, r);
    if (r == 0) return ramanujan_sum(c, kappa);
    cplx acc = 0.0;
    for (long d = 1; d < c; ++d) {
        if (std::gcd(d, long(c)) != 1) continue;
        long a = mod_inverse(d, c);
        double ph = 2.0 * kPi * (double(kappa) * a + double(r) * d) / c;
        acc += cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

struct KloosterTable {
    static constexpr int kMaxJ = 14;
    static constexpr int kCBig = 3000;
    // prefix[j][c] = sum_{c' <= c} S c'^{-(4+2j)}
    std::array<std::vector<cplx>, kMaxJ + 1> prefix;
};

std::mutex g_kloo_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const KloosterTable>> g_kloo_cache;

std::shared_ptr<const KloosterTable> klooster_table(int kappa, int r) {
    {
        std::lock_guard<std::mutex> lk(g_kloo_mutex);
        auto it = g_kloo_cache.find({kappa, r});
        if (it != g_kloo_cache.end()) return it->second;
    }
    auto tab = std::make_shared<KloosterTable>();
    for (auto& v : tab->prefix) v.assign(KloosterTable::kCBig + 1, 0.0);
    for (int c = 1; c <= KloosterTable::kCBig; ++c) {
        cplx S = kloosterman(kappa, r, c);
        for (int j = 0; j <= KloosterTable::kMaxJ; ++j)
            tab->prefix[j][c] = tab->prefix[j][c - 1] + S * std::pow(double(c), -(4.0 + 2.0 * j));
    }
    std::lock_guard<std::mutex> lk(g_kloo_mutex);
    auto [it, ok] = g_kloo_cache.emplace(std::make_pair(kappa, r), tab);
    (void)ok;
    return it->second;
}

// sum_{c >= c1} S(kappa, r; c) c^{-(4+2j)}. Beyond kCBig the Weil bound
// |S| <= d(c) sqrt(gcd) sqrt(c) keeps the remainder near 1e-9 or below.
cplx klooster_dirichlet_tail(int kappa, int r, int j, int c1) {
    if (kappa == 0 || r == 0) {
        const int k = (kappa == 0) ? r : kappa;
        double full = ramanujan_dirichlet_full_impl(k, 4.0 + 2.0 * j);
        double pre = 0.0;
        for (int c = 1; c < c1; ++c)
            pre += ramanujan_sum(c, k) * std::pow(double(c), -(4.0 + 2.0 * j));
        return full - pre;
    }
    auto tab = klooster_table(kappa, r);
    const int jj = std::min(j, KloosterTable::kMaxJ);
    const int lo = std::min(c1 - 1, KloosterTable::kCBig);
    return tab->prefix[jj][KloosterTable::kCBig] - tab->prefix[jj][lo];
}

// ---------------------------------------------------------------------------
// Poincare series of the blended seed phi, optionally phase-twisted by kappa
// ---------------------------------------------------------------------------

struct PoincareCore {
    cplx alpha{0.0};
    double beta = 0.0;
    int kappa = 0;
    int logn = 0;

    double w_ser = 0.5;
    double w_cut = std::numeric_limits<double>::infinity();

    PoincareCore(cplx a, double b, int k, int n) : alpha(a), beta(b), kappa(k), logn(n) {
        w_ser = std::min(0.5, 0.25 / std::max(1, std::abs(kappa)));
        if (kappa != 0 && beta > 0.0) {
            // saddle analysis: |K(w)| <~ e^{-pi w (kappa^2 - beta^2)/beta}; cut
            // where that is negligible, capped by the cancellation noise wall
            const double gap = kPi * (double(kappa) * kappa - beta * beta) / beta;
            w_cut = std::min(42.0 / gap, 30.0 / (kPi * beta));
        }
    }

    cplx growth_form(double y) const {
        cplx g = std::pow(cplx(y), alpha) * std::exp(kPi * beta * y);
        if (logn > 0) {
            double lf = 1.0;
            for (int k = 2; k <= logn; ++k) lf *= k;
            g *= std::pow(std::log(y), double(logn)) / lf;
        }
        return g;
    }

    // phi: y^2 below 1/2, growth form above 2, quintic smoothstep in log y between
    cplx seed(double y) const {
        if (y <= 0.5) return y * y;
        if (y >= 2.0) return growth_form(y);
        const double u = std::log(2.0 * y) / std::log(4.0);
        const double lam = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        return (1.0 - lam) * (y * y) + lam * growth_form(y);
    }

    // K(w) = int_R phi(w/(1+v^2)) e^{-2 pi i kappa w v/(1+v^2)} dv
    cplx kernelK(double w, double eps) const {
        if (w > w_cut) return 0.0;
        if (w <= w_ser) {
            if (kappa == 0) return w * w * (kPi / 2.0);
            double sum = 0.0, fac = 1.0;
            for (int m = 0; m <= 14; ++m) {
                if (m > 0) fac *= (2.0 * m - 1.0) * (2.0 * m);
                double t = std::pow(2.0 * kPi * kappa * w, 2.0 * m) / fac * eta_even(2 * m);
                sum += (m % 2) ? -t : t;
                if (t < 1e-18) break;
            }
            return w * w * sum;
        }
        // theta substitution: 2 int_0^{pi/2} phi(w cos^2 t) cos(pi kappa w sin 2t) sec^2 t dt
        auto f = [&](double t) {
            const double c = std::cos(t);
            cplx val = seed(w * c * c) / (c * c);
            if (kappa != 0) val *= std::cos(kPi * kappa * w * std::sin(2.0 * t));
            return val;
        };
        const double ta = (w > 2.0) ? std::acos(std::sqrt(2.0 / w)) : 0.0;
        const double tb = (w > 0.5) ? std::acos(std::sqrt(0.5 / w)) : 0.0;
        cplx acc = 0.0;
        if (ta > 1e-12) acc += detail::adaptive_gauss(f, 0.0, ta, eps / 3.0);
        if (tb > ta + 1e-12) acc += detail::adaptive_gauss(f, ta, tb, eps / 3.0);
        acc += detail::adaptive_gauss(f, tb, kPi / 2.0, eps / 3.0);
        return 2.0 * acc;
    }

    // unfolded constant term, valid at every height
    cplx a0(double y, double eps) const {
        cplx total = (kappa == 0) ? seed(y) : cplx(0.0);
        const int c1 = std::max(1, int(std::ceil(std::sqrt(1.0 / (w_ser * y)))));
        std::vector<double> rsum(c1, 0.0);
        const double eps_k = eps / (3.0 * y * c1 + 3.0);
        for (int c = 1; c < c1; ++c) {
            rsum[c] = ramanujan_sum(c, kappa);
            if (rsum[c] == 0.0) continue;
            const double w0 = 1.0 / (double(c) * c * y);
            total += y * rsum[c] * kernelK(w0, eps_k / std::abs(rsum[c]));
        }
        // c >= c1: kernel series summed over c. The m = 0 layer uses the
        // closed Dirichlet form minus the prefix; higher layers are summed
        // directly, since full-minus-prefix cancels to c1^{-(3+4m)} and the
        // y^{-1-2m} factor amplifies the rounding noise catastrophically.
        double fac = 1.0;
        for (int m = 0; m <= 12; ++m) {
            if (m > 0) {
                if (kappa == 0) break;
                fac *= (2.0 * m - 1.0) * (2.0 * m);
            }
            double q_m = std::pow(2.0 * kPi * kappa, 2.0 * m) / fac * eta_even(2 * m);
            if (m % 2) q_m = -q_m;
            const double w = 4.0 + 4.0 * m;
            double tail = 0.0;
            if (m == 0) {
                tail = ramanujan_dirichlet_full_impl(kappa, w);
                for (int c = 1; c < c1; ++c)
                    if (rsum[c] != 0.0) tail -= rsum[c] * std::pow(double(c), -w);
            } else {
                for (int c = c1; c < c1 + 40000; ++c) {
                    double term = ramanujan_sum(c, kappa) * std::pow(double(c), -w);
                    tail += term;
                    if (double(c) * std::pow(double(c), -w) <
                        1e-18 * (std::abs(tail) + std::pow(double(c1), -w + 1.0)))
                        break;
                }
            }
            total += q_m * std::pow(y, -1.0 - 2.0 * m) * tail;
            if (m > 0 && std::abs(q_m) * std::pow(w_ser, 2.0 * m + 2.0) < 1e-19) break;
        }
        return total;
    }

    // The blended seed is only C^2, so the Fourier modes of P[phi] decay
    // polynomially. Split instead: phi = (y^2 everywhere) + psi, psi supported
    // on [1/2, inf). The quadratic-seed series has analytic terms and
    // exponentially decaying modes; psi contributes finitely many cosets with
    // Im(gamma z) > 1/2, evaluated pointwise.
    cplx psi(double w) const { return (w <= 0.5) ? cplx(0.0) : seed(w) - w * w; }

    cplx boundary_part(double x, double y) const {
        cplx B = psi(y);
        if (kappa != 0) B *= std::exp(cplx(0.0, 2.0 * kPi * kappa * x));
        for (long c = 1; double(c) * c * y * y < 2.0 * y; ++c) {
            const double cy = c * y;
            const double span = std::sqrt(2.0 * y - cy * cy);
            const long d_lo = long(std::floor(-c * x - span));
            const long d_hi = long(std::ceil(-c * x + span));
            for (long d = d_lo; d <= d_hi; ++d) {
                if (std::gcd(c, std::abs(d)) != 1) continue;
                const double u = c * x + d;
                const double Q = u * u + cy * cy;
                const double im = y / Q;
                if (im <= 0.5) continue;
                cplx term = psi(im);
                if (kappa != 0) {
                    long a = mod_inverse(d, c);
                    double re = double(a) / double(c) - u / (double(c) * Q);
                    term *= std::exp(cplx(0.0, 2.0 * kPi * kappa * re));
                }
                B += term;
            }
        }
        return B;
    }

    cplx mu_cached(int j, double tau, double eps) const {
        std::lock_guard<std::mutex> lk(mu_mutex);
        auto it = mu_cache.find({tau, j});
        if (it != mu_cache.end() && it->second.first <= eps) return it->second.second;
        cplx v = mu_integral(j, tau, eps);
        mu_cache[{tau, j}] = {eps, v};
        return v;
    }

    // J_c(r, y) for the pure quadratic seed: phase series in A = 2 pi kappa w0
    // against the closed/cached mu kernels, or head quadrature + expanded tails
    // when A is large.
    cplx modeJ_quad(int c, int r, double y, double eps) const {
        const double w0 = 1.0 / (double(c) * c * y);
        const double A = 2.0 * kPi * kappa * w0;
        const double omega = 2.0 * kPi * r * y;
        const double tau = r * y;
        if (std::abs(A) <= 2.0) {
            cplx sum = 0.0, cj = 1.0;  // (-iA)^j / j!
            int small = 0;             // odd terms vanish at tau = 0, need two in a row
            for (int j = 0; j <= 28 && small < 2; ++j) {
                if (j > 0) cj *= cplx(0.0, -A) / double(j);
                cplx term = cj * mu_cached(j, tau, eps * 0.05);
                sum += term;
                small = (std::abs(term) < 1e-17 * (1.0 + std::abs(sum)) && j > 1)
                            ? small + 1
                            : 0;
            }
            return y * w0 * w0 * sum;
        }
        const double V0 = 8.0;
        cplx head = detail::adaptive_gauss(
            [&](double v) {
                const double q = 1.0 + v * v;
                const double ww = w0 / q;
                return ww * ww * std::exp(cplx(0.0, -(A * v / q + omega * v)));
            },
            -V0, V0, eps * 0.5 / std::max(1.0, y));
        cplx tail = 0.0;
        cplx cj = w0 * w0;  // w0^2 (-iA)^j / j!; tail integrals carry V0^{-j}
        int small = 0;
        for (int j = 0; j <= 48 && small < 2; ++j) {
            if (j > 0) cj *= cplx(0.0, -A) / double(j);
            const double sgn = (j % 2) ? -1.0 : 1.0;
            cplx term = cj * (osc_tail(j, V0, omega) + sgn * osc_tail(j, V0, -omega));
            tail += term;
            small = (std::abs(term) < 1e-17 * (1.0 + std::abs(tail)) && j > 2) ? small + 1
                                                                               : 0;
        }
        return y * (head + tail);
    }

    // Fourier mode of the quadratic-seed series, reduced-range heights
    cplx mode_quad(int r, double y, double eps) const {
        cplx base = (r == kappa) ? cplx(y * y) : cplx(0.0);
        const int c1 = std::max(1, int(std::ceil(std::sqrt(1.0 / (w_ser * y)))));
        for (int c = 1; c < c1; ++c) {
            cplx S = kloosterman(kappa, r, c);
            if (std::abs(S) < 1e-14) continue;
            base += S * modeJ_quad(c, r, y, eps / (std::abs(S) * c1));
        }
        const double tau = r * y;
        cplx cj(1.0, 0.0);  // (-2 pi i kappa)^j / j!
        int small = 0;
        for (int j = 0; j <= 14 && small < 2; ++j) {
            if (j > 0) {
                if (kappa == 0) break;
                cj *= cplx(0.0, -2.0 * kPi * kappa) / double(j);
            }
            cplx D = klooster_dirichlet_tail(kappa, r, j, c1);
            cplx term = cj * mu_cached(j, tau, eps * 0.1) * std::pow(y, -1.0 - double(j)) * D;
            base += term;
            small = (j > 1 && std::abs(term) < 1e-17 * (1.0 + std::abs(base))) ? small + 1
                                                                               : 0;
        }
        return base;
    }

    double seed_log_abs(double y) const {
        double v = alpha.real() * std::log(y) + kPi * beta * y;
        if (logn > 0) v += logn * std::log(std::abs(std::log(y)) + 1e-300);
        return v;
    }

    cplx mode_cached(int r, double y, double eps) const {
        {
            std::lock_guard<std::mutex> lk(cache_mutex);
            auto it = cache.find({y, r});
            if (it != cache.end() && it->second.first <= eps) return it->second.second;
        }
        cplx v = mode_quad(r, y, eps);
        std::lock_guard<std::mutex> lk(cache_mutex);
        cache[{y, r}] = {eps, v};
        return v;
    }

    cplx eval_reduced(double x, double y, double eps) const {
        if (seed_log_abs(y) > 660.0)
            throw numeric_error("poincare eval: value exceeds double range, use log_abs");
        const double scale = std::max({1.0, std::abs(seed(y)), y * y});
        int r_max = int(std::ceil((std::log(scale / eps) + 6.0) / (2.0 * kPi * y)));
        r_max = std::max(r_max, std::abs(kappa));
        cplx f = boundary_part(x, y);
        for (int r = -r_max; r <= r_max; ++r)
            f += mode_cached(r, y, eps / (2.0 * r_max + 1.0)) *
                 std::exp(cplx(0.0, 2.0 * kPi * r * x));
        return f;
    }

    // gcd-filtered double loop; reference evaluator for tests
    cplx direct_coset_sum(double x, double y, double eps) const {
        cplx total = seed(y);
        if (kappa != 0) total *= std::exp(cplx(0.0, 2.0 * kPi * kappa * x));
        const double Qmax = (12.0 / kPi) * y / eps;
        const long cmax = long(std::sqrt(Qmax) / y) + 1;
        for (long c = 1; c <= cmax; ++c) {
            const double cy = c * y;
            if (cy * cy > Qmax) break;
            const double span = std::sqrt(Qmax - cy * cy);
            const long d_lo = long(std::floor(-c * x - span));
            const long d_hi = long(std::ceil(-c * x + span));
            for (long d = d_lo; d <= d_hi; ++d) {
                if (std::gcd(c, std::abs(d)) != 1) continue;
                const double u = c * x + d;
                const double Q = u * u + cy * cy;
                cplx term = seed(y / Q);
                if (kappa != 0) {
                    long a = mod_inverse(d, c);
                    double re = double(a) / double(c) - u / (double(c) * Q);
                    term *= std::exp(cplx(0.0, 2.0 * kPi * kappa * re));
                }
                total += term;
            }
        }
        return total;
    }

    mutable std::mutex cache_mutex;
    mutable std::map<std::pair<double, int>, std::pair<double, cplx>> cache;
    mutable std::mutex mu_mutex;
    mutable std::map<std::pair<double, int>, std::pair<double, cplx>> mu_cache;
};

// ---------------------------------------------------------------------------
// builtin catalog
// ---------------------------------------------------------------------------

cplx delta_eval(const HPoint& z, double eps);
cplx delta_a0(double y, double eps);
cplx j_eval(const HPoint& z, double eps);

cplx delta_eval(const HPoint& z, double eps) {
    (void)eps;
    const HPoint w = reduce_to_fundamental(z).point;
    const auto tau = tau_table_at_least(48);
    const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * cplx(w.x, w.y));
    cplx d = 0.0, qn = 1.0;
    for (int n = 1; n <= 48; ++n) {
        qn *= q;
        d += tau[n] * qn;
    }
    return std::pow(w.y, 12.0) * std::norm(d);
}

cplx delta_a0(double y, double eps) {
    const double damp = 4.0 * kPi * y;
    // terms ~ n^12 e^{-damp n} peak near n* = 12/damp; cut relative to the peak
    const double n_star = std::max(1.0, 12.0 / damp);
    const double peak_ln = 12.0 * std::log(n_star) - std::min(12.0, damp);
    const double cut_ln = peak_ln + std::log(std::max(eps, 1e-16));
    int n_max = 64;
    while (n_max < (1 << 16) && 12.0 * std::log(double(n_max)) - damp * n_max > cut_ln)
        n_max *= 2;
    if (n_max >= (1 << 16))
        throw numeric_error("delta_cusp a0: tau table beyond supported range at this height");
    const auto tau = tau_table_at_least(n_max);
    double sum = 0.0;
    for (int n = n_max; n >= 1; --n) sum += tau[n] * tau[n] * std::exp(-damp * n);
    return std::pow(y, 12.0) * sum;
}

cplx j_eval(const HPoint& z, double eps) {
    (void)eps;
    const HPoint w = reduce_to_fundamental(z).point;
    if (2.0 * kPi * w.y > 660.0)
        throw numeric_error("j_invariant: value exceeds double range, use log_abs");
    static const std::vector<double> jc = j_coefficients(24);
    const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * cplx(w.x, w.y));
    cplx acc = jc[0] / q;
    cplx qn = 1.0;
    for (size_t k = 1; k < jc.size(); ++k) {
        acc += jc[k] * qn;
        qn *= q;
    }
    return acc;
}

}  // namespace

ModularFunctionSpec make_builtin(const std::string& name, const BuiltinParams& p) {
    ModularFunctionSpec f;
    f.name = name;

    if (name == "delta_cusp") {
        f.growth = GrowthProfile::rapid_decay();
        f.evaluator = delta_eval;
        f.exact_a0 = delta_a0;
        f.a0_decays_rapidly = true;
        f.log_abs = [](const HPoint& z, double eps) {
            return std::log(std::abs(delta_eval(z, eps)));
        };
        return f;
    }

    if (name == "eisenstein_fixed") {
        const double s0 = p.s0;
        if (!(s0 > 1.0 + kEisensteinMargin))
            throw validation_error("eisenstein_fixed: need real s0 > 1 + margin");
        const cplx ratio = zeta_star(2.0 * s0 - 1.0) / zeta_star(2.0 * s0);
        f.growth.kind = GrowthProfile::Kind::Polynomial;  // exponents outside the class
        f.growth.terms = {{1.0, s0, 0}, {ratio, 1.0 - s0, 0}};
        f.oracle_only = true;
        f.evaluator = [s0](const HPoint& z, double eps) {
            return eisenstein_direct(cplx(s0), z, TruncationBudget(eps));
        };
        f.exact_a0 = [s0, ratio](double y, double) {
            return std::pow(y, s0) + ratio * std::pow(y, 1.0 - s0);
        };
        f.a0_tail = {{1.0, s0, 0}, {ratio, 1.0 - s0, 0}};
        f.a0_tail_from = 1e-30;
        return f;
    }

    if (name == "poincare_typeII") {
        if (p.alpha.real() >= 0.5)
            throw validation_error("poincare_typeII: need Re(alpha) < 1/2");
        if (p.n < 0) throw validation_error("poincare_typeII: need n >= 0");
        auto core = std::make_shared<PoincareCore>(p.alpha, 0.0, 0, p.n);
        const double c_lad = (kPi / 2.0) * ramanujan_dirichlet_full_impl(0, 4.0);
        double nfac = 1.0;
        for (int k = 2; k <= p.n; ++k) nfac *= k;
        f.growth = GrowthProfile::polynomial({{1.0, p.alpha, p.n}, {c_lad, -1.0, 0}});
        f.evaluator = [core](const HPoint& z, double eps) {
            const HPoint w = reduce_to_fundamental(z).point;
            return core->eval_reduced(w.x, w.y, eps);
        };
        f.exact_a0 = [core](double y, double eps) { return core->a0(y, eps); };
        f.a0_tail = {{1.0 / nfac, p.alpha, p.n}, {c_lad, -1.0, 0}};
        f.a0_tail_from = 2.0;
        // C0 = int_0^inf phi y^{-2} dy = 1/2 + blend piece + Gamma-form upper piece
        const cplx om = 1.0 - p.alpha;
        const cplx xx = om * std::log(2.0);
        cplx esum = 0.0, xp = 1.0;
        double kf = 1.0;
        for (int k = 0; k <= p.n; ++k) {
            if (k > 0) {
                kf *= k;
                xp *= xx;
            }
            esum += xp / kf;
        }
        // int_2^inf y^{a-2} ln^n y/n! dy = e^{-x} sum_{k<=n} x^k/k! / (1-a)^{n+1}, x=(1-a)ln2
        cplx upper = std::exp(-xx) * esum / std::pow(om, double(p.n + 1));
        cplx blend = detail::adaptive_gauss(
            [core](double y) { return core->seed(y) / (y * y); }, 0.5, 2.0, 1e-13);
        f.exact_C0 = 0.5 + blend + upper;
        return f;
    }

    if (name == "poincare_heterotic") {
        f.growth = GrowthProfile::exponential(p.alpha, p.beta, p.kappa);  // validates
        auto core = std::make_shared<PoincareCore>(p.alpha, p.beta, p.kappa, 0);
        f.evaluator = [core](const HPoint& z, double eps) {
            const HPoint w = reduce_to_fundamental(z).point;
            return core->eval_reduced(w.x, w.y, eps);
        };
        f.exact_a0 = [core](double y, double eps) { return core->a0(y, eps); };
        f.log_abs = [core](const HPoint& z, double eps) {
            const HPoint w = reduce_to_fundamental(z).point;
            if (core->seed_log_abs(w.y) > 600.0) return core->seed_log_abs(w.y);
            return std::log(std::abs(core->eval_reduced(w.x, w.y, eps)));
        };
        double fac = 1.0;
        for (int m = 0; m <= 4; ++m) {
            if (m > 0) fac *= (2.0 * m - 1.0) * (2.0 * m);
            double q_m = std::pow(2.0 * kPi * p.kappa, 2.0 * m) / fac * eta_even(2 * m);
            if (m % 2) q_m = -q_m;
            f.a0_tail.push_back(
                {q_m * ramanujan_dirichlet_full_impl(p.kappa, 4.0 + 4.0 * m),
                 -1.0 - 2.0 * m, 0});
        }
        f.a0_tail_from = 1.0 / (std::min(0.5, 0.25 / std::abs(p.kappa)));
        return f;
    }

    if (name == "j_invariant") {
        f.growth.kind = GrowthProfile::Kind::Exponential;  // beta = 2 breaks the bound
        f.growth.alpha = 0.0;
        f.growth.beta = 2.0;
        f.growth.kappa = -1;
        f.exploratory = true;
        f.evaluator = j_eval;
        f.exact_a0 = [](double, double) { return cplx(744.0); };
        f.a0_tail = {{744.0, 0.0, 0}};
        f.a0_tail_from = 1e-30;
        f.log_abs = [](const HPoint& z, double eps) {
            const HPoint w = reduce_to_fundamental(z).point;
            if (2.0 * kPi * w.y > 600.0) return 2.0 * kPi * w.y;
            return std::log(std::abs(j_eval(z, eps)));
        };
        return f;
    }

    throw validation_error("make_builtin: unknown builtin '" + name + "'");
}

// gcd-per-pair reference coset sum (tests and benchmarks)
namespace detail_modfun {
cplx poincare_direct_reference(cplx alpha, double beta, int kappa, int n, const HPoint& z,
                               double eps) {
    PoincareCore core(alpha, beta, kappa, n);
    const HPoint w = reduce_to_fundamental(z).point;
    return core.direct_coset_sum(w.x, w.y, eps);
}

cplx poincare_debug_mode(cplx alpha, double beta, int kappa, int r, double y, double eps) {
    PoincareCore core(alpha, beta, kappa, 0);
    return core.mode_quad(r, y, eps);
}

cplx poincare_debug_boundary(cplx alpha, double beta, int kappa, double x, double y) {
    PoincareCore core(alpha, beta, kappa, 0);
    return core.boundary_part(x, y);
}

cplx poincare_debug_modeJ(cplx alpha, double beta, int kappa, int c, int r, double y,
                          double eps) {
    PoincareCore core(alpha, beta, kappa, 0);
    return core.modeJ_quad(c, r, y, eps);
}
}  // namespace detail_modfun

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

cplx evaluate(const ModularFunctionSpec& f, const HPoint& z, TruncationBudget budget) {
    require_valid(z, "evaluate");
    return f.evaluator(z, budget.eps);
}

cplx constant_term(const ModularFunctionSpec& f, double y, TruncationBudget budget,
                   bool use_exact) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw validation_error("constant_term: y must be > 0");
    if (use_exact && f.exact_a0) return f.exact_a0(y, budget.eps);
    const int n0 = std::max(16, 1 << int(std::ceil(std::log2(std::max(1.0, 6.0 / y)))));
    auto res = detail::periodic_mean(
        [&](double x) { return f.evaluator({x, y}, budget.eps * 0.1); }, budget.eps, n0);
    if (!res.converged)
        throw numeric_error("constant_term: quadrature not converged, err " +
                            std::to_string(res.err));
    return res.value;
}

cplx integrate_domain_xfirst(const std::function<cplx(const HPoint&)>& g, double y_cut,
                             double eps) {
    const double y_floor = std::sqrt(3.0) / 2.0;
    auto slice = [&](double y) -> cplx {
        if (y >= 1.0) {
            auto res = detail::periodic_mean(
                [&](double x) { return g({x - 0.5, y}); }, eps * 0.02, 32);
            return res.value;
        }
        const double xc = std::sqrt(1.0 - y * y);
        cplx left = detail::adaptive_gauss([&](double x) { return g({x, y}); }, -0.5, -xc,
                                           eps * 0.01);
        cplx right = detail::adaptive_gauss([&](double x) { return g({x, y}); }, xc, 0.5,
                                            eps * 0.01);
        return left + right;
    };
    cplx low = detail::adaptive_gauss(slice, y_floor, 1.0, eps * 0.4);
    cplx high = (y_cut > 1.0)
                    ? detail::adaptive_gauss(slice, 1.0, y_cut, eps * 0.6)
                    : cplx(0.0);
    return low + high;
}

namespace {

// int_Y^inf y^{p-2} log^j y dy = Y^{p-1} sum_{k<=j} x^k/k! * j!/(1-p)^{j+1}, x=(1-p)lnY
cplx tail_term_integral(const TailTerm& t, double Y) {
    const cplx om = 1.0 - t.power;
    if (om.real() <= 0.0)
        throw validation_error("petersson_integral: tail power >= 1, integral diverges");
    const cplx x = om * std::log(Y);
    cplx esum = 0.0, xp = 1.0;
    double kf = 1.0, jf = 1.0;
    for (int k = 0; k <= t.logpow; ++k) {
        if (k > 0) {
            kf *= k;
            xp *= x;
        }
        esum += xp / kf;
    }
    for (int k = 2; k <= t.logpow; ++k) jf *= k;
    return t.coef * std::pow(Y, t.power - 1.0) * jf * esum / std::pow(om, double(t.logpow + 1));
}

cplx a0_tail_value(const ModularFunctionSpec& f, double y) {
    cplx v = 0.0;
    for (const auto& t : f.a0_tail)
        v += t.coef * std::pow(cplx(y), t.power) * std::pow(std::log(y), double(t.logpow));
    return v;
}

}  // namespace

PeterssonResult petersson_integral(const ModularFunctionSpec& f, TruncationBudget budget) {
    if (f.oracle_only)
        throw validation_error("petersson_integral: growth exponents make f non-integrable");
    const double eps = budget.eps;

    double Y = 4.0;
    if (f.a0_decays_rapidly) {
        while (Y < 40.0 && std::abs(f.exact_a0 ? f.exact_a0(Y, eps)
                                               : f.evaluator({0.25, Y}, eps)) > 0.05 * eps)
            Y += 1.0;
    } else {
        Y = std::max(4.0, f.a0_tail_from);
    }

    PeterssonResult out;
    cplx numeric = integrate_domain_xfirst(
        [&](const HPoint& z) { return f.evaluator(z, eps * 0.05) / (z.y * z.y); }, Y,
        eps * 0.5);
    cplx tail = 0.0;
    if (!f.a0_decays_rapidly)
        for (const auto& t : f.a0_tail) tail += tail_term_integral(t, Y);
    out.value = numeric + tail;
    out.err_est = eps;

    // sampled cusp behavior vs the declared tail form
    if (!f.a0_decays_rapidly && !f.a0_tail.empty()) {
        cplx probe = f.exact_a0 ? f.exact_a0(Y, eps) : constant_term(f, Y, budget, false);
        cplx form = a0_tail_value(f, Y);
        if (std::abs(probe - form) > 3e-2 * (1.0 + std::abs(form)))
            out.profile_mismatch = true;
    }
    return out;
}

}  // namespace horolab
