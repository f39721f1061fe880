#include "horolab/specialfn.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace horolab {

namespace {

constexpr double kPoleTol = 1e-12;

// Lanczos g = 7, 9 coefficients.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

// B_2, B_4, ..., B_26.
constexpr std::array<double, 13> kBernoulli = {
    1.0 / 6,          -1.0 / 30,         1.0 / 42,
    -1.0 / 30,        5.0 / 66,          -691.0 / 2730,
    7.0 / 6,          -3617.0 / 510,     43867.0 / 798,
    -174611.0 / 330,  854513.0 / 138,    -236364091.0 / 2730,
    8553103.0 / 6};

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool near_nonpositive_integer(cplx s, double tol, long* n_out) {
    if (s.real() > 0.5 || std::abs(s.imag()) > tol) return false;
    double r = std::round(s.real());
    if (r > 0.0 || std::abs(s.real() - r) > tol) return false;
    if (n_out) *n_out = long(-r);
    return true;
}

cplx lanczos_gamma_pos(cplx s) {
    // valid for Re(s) >= 0.5
    cplx z = s - 1.0;
    cplx acc = kLanczos[0];
    for (int i = 1; i < int(kLanczos.size()); ++i) acc += kLanczos[i] / (z + double(i));
    cplx t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

// Euler-Maclaurin zeta, adequate for Re(s) > 0 away from s = 1,
// |Im s| bounded; N scales with |Im s|.
cplx zeta_euler_maclaurin(cplx s) {
    const double t = std::abs(s.imag());
    const int N = std::max(24, int(std::ceil(0.7 * t)) + 24);
    const int K = 12;

    cplx sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::pow(double(n), -s);
    const cplx Ns = std::pow(double(N), -s);
    sum += Ns * double(N) / (s - 1.0);
    sum += Ns * 0.5;

    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    cplx rising = s;  // product of (s+j), j = 0..2k-2
    for (int k = 1; k <= K; ++k) {
        cplx term = kBernoulli[k - 1] / factorial(2 * k) * rising *
                    std::pow(double(N), -s - double(2 * k - 1));
        sum += term;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    }
    return sum;
}

// Cohen-Rodriguez Villegas-Zagier acceleration of eta(s) = sum (-1)^k (k+1)^{-s}.
cplx eta_cvz(cplx s) {
    const int n = 48 + int(std::ceil(std::abs(s.imag())));
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        acc += c * std::pow(double(k + 1), -s);
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
    }
    return acc / d;
}

// Lentz continued fraction for Gamma(s, x), any complex s, x > 0 large enough.
cplx upper_gamma_cf(cplx s, double x) {
    const double tiny = 1e-290;
    cplx b = x + 1.0 - s;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx f = d;
    for (int k = 1; k < 600; ++k) {
        cplx an = -double(k) * (double(k) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        cplx delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x)) * f;
}

// Series for the lower incomplete gamma; needs s away from nonpositive integers.
cplx lower_gamma_series(cplx s, double x) {
    cplx term = 1.0 / s;
    cplx sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (s + double(n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum * std::exp(-x + s * std::log(x));
}

double exponential_integral_e1(double x) {
    if (x <= 1.5) {
        constexpr double euler_gamma = 0.57721566490153286060651209;
        double sum = -euler_gamma - std::log(x);
        double term = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= -x / k;
            double add = -term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return upper_gamma_cf(cplx(0.0), x).real();
}

// Gamma(-m, x) for integer m >= 0 via E1 and integration by parts.
cplx upper_gamma_nonpositive_int(long m, double x) {
    double e1 = exponential_integral_e1(x);
    if (m == 0) return e1;
    double sum = 0.0, fact = 1.0;  // sum_{j=0}^{m-1} (-1)^j j! / x^{j+1}
    double xp = x;
    for (long j = 0; j < m; ++j) {
        if (j > 0) fact *= j;
        sum += ((j % 2) ? -fact : fact) / xp;
        xp *= x;
    }
    double mfact = 1.0;
    for (long j = 2; j <= m; ++j) mfact *= j;
    double sign = (m % 2) ? -1.0 : 1.0;
    return sign / mfact * (e1 - std::exp(-x) * sum);
}

}  // namespace

cplx gamma_fn(cplx s) {
    long n = 0;
    if (near_nonpositive_integer(s, kPoleTol, &n)) {
        double residue = ((n % 2) ? -1.0 : 1.0) / factorial(int(n));
        throw pole_error("gamma pole at nonpositive integer", s, residue);
    }
    if (s.real() >= 0.5) return lanczos_gamma_pos(s);
    // reflection: Gamma(s) = pi / (sin(pi s) Gamma(1-s))
    return kPi / (std::sin(kPi * s) * lanczos_gamma_pos(1.0 - s));
}

cplx zeta_fn(cplx s) {
    if (std::abs(s - 1.0) < kPoleTol)
        throw pole_error("zeta pole at s = 1", s, 1.0);
    if (std::abs(s.imag()) > 60.0)
        throw numeric_error("zeta: |Im s| > 60 unsupported");

    if (s.real() > 1.25) return zeta_euler_maclaurin(s);
    if (s.real() > 0.0) {
        // eta route; near zeros of 1 - 2^{1-s} (s = 1 + 2 pi i k/ln 2) the
        // division degenerates, fall back to Euler-Maclaurin there.
        cplx denom = 1.0 - std::pow(2.0, 1.0 - s);
        if (std::abs(denom) < 0.01) return zeta_euler_maclaurin(s);
        return eta_cvz(s) / denom;
    }
    // sin(pi s/2) vanishes against the zeta(1-s) pole at s = 0; Laurent there
    if (std::abs(s) < 1e-8) return -0.5 - 0.91893853320467274 * s;
    // reflection: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    cplx chi = std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s * 0.5) *
               gamma_fn(1.0 - s);
    return chi * zeta_fn(1.0 - s);
}

cplx zeta_star(cplx s) {
    if (std::abs(s) < kPoleTol) throw pole_error("zeta* pole at s = 0", s, -1.0);
    if (std::abs(s - 1.0) < kPoleTol) throw pole_error("zeta* pole at s = 1", s, 1.0);
    // At negative even integers Gamma(s/2) poles against a trivial zeta zero;
    // sidestep the 0 * inf by the exact s <-> 1-s symmetry in a small disk.
    if (s.real() < -1.5) {
        double r = std::round(s.real() * 0.5) * 2.0;
        if (r <= -2.0 && std::abs(s - r) < 1e-3) return zeta_star(1.0 - s);
    }
    return std::pow(kPi, -0.5 * s) * gamma_fn(0.5 * s) * zeta_fn(s);
}

cplx upper_incomplete_gamma(cplx s, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw validation_error("upper_incomplete_gamma: x must be > 0");
    if (x >= std::abs(s) + 1.5 || x >= 40.0) return upper_gamma_cf(s, x);

    long m = 0;
    if (near_nonpositive_integer(s, 1e-9, &m)) return upper_gamma_nonpositive_int(m, x);

    if (s.real() >= 0.25) return gamma_fn(s) - lower_gamma_series(s, x);

    // Small x, Re(s) < 0.25: climb to Re in [0.25, 1.25), then recurse down
    // with Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s. Loses digits when
    // s sits within ~1e-6 of a nonpositive integer; handled above for the
    // exact-integer case.
    int k = int(std::ceil(0.25 - s.real()));
    cplx top = s + double(k);
    cplx g = gamma_fn(top) - lower_gamma_series(top, x);
    for (int j = k - 1; j >= 0; --j) {
        cplx sj = s + double(j);
        g = (g - std::exp(-x + sj * std::log(x))) / sj;
    }
    return g;
}

cplx lower_incomplete_gamma(cplx s, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw validation_error("lower_incomplete_gamma: x must be > 0");
    if (x < std::abs(s) + 1.5 && s.real() > 0.0) return lower_gamma_series(s, x);
    return gamma_fn(s) - upper_incomplete_gamma(s, x);
}

cplx hurwitz_zeta(cplx w, double a) {
    if (!(a > 0.0)) throw validation_error("hurwitz_zeta: a must be > 0");
    if (w.real() <= 1.0) throw validation_error("hurwitz_zeta: Re(w) must be > 1");
    const int M = std::max(10, int(std::ceil(std::abs(w.imag()))) + 8);
    const int K = 10;
    cplx sum = 0.0;
    for (int k = 0; k < M; ++k) sum += std::pow(a + k, -w);
    const double Ma = a + M;
    const cplx Mw = std::pow(Ma, -w);
    sum += Mw * Ma / (w - 1.0);
    sum += Mw * 0.5;
    cplx rising = w;
    for (int k = 1; k <= K; ++k) {
        sum += kBernoulli[k - 1] / factorial(2 * k) * rising *
               std::pow(Ma, -w - double(2 * k - 1));
        rising *= (w + double(2 * k - 1)) * (w + double(2 * k));
    }
    return sum;
}

namespace {

// zeta*(1/2 + it) is real by the functional equation; its sign changes
// bracket the critical-line zeros.
double completed_on_line(double t) { return zeta_star(cplx(0.5, t)).real(); }

std::vector<double> locate_zeros() {
    std::vector<double> zeros;
    const double t_lo = 2.0, t_hi = 34.0, step = 0.25;
    double prev_t = t_lo, prev_v = completed_on_line(t_lo);
    for (double t = t_lo + step; t <= t_hi + 1e-9; t += step) {
        double v = completed_on_line(t);
        if (prev_v == 0.0 || (prev_v < 0) != (v < 0)) {
            double a = prev_t, b = t, fa = prev_v;
            for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
                double m = 0.5 * (a + b), fm = completed_on_line(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fa < 0) != (fm < 0)) b = m;
                else { a = m; fa = fm; }
            }
            zeros.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_v = v;
    }
    return zeros;
}

}  // namespace

const std::vector<double>& zeta_zero_table() {
    static const std::vector<double> table = locate_zeros();
    return table;
}

double zeta_zero_find(int k) {
    const auto& table = zeta_zero_table();
    if (k < 1 || k > int(table.size()))
        throw validation_error("zeta_zero_find: bracket not found, k exceeds table");
    return table[k - 1];
}

}  // namespace horolab
