#include "horolab/transforms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "horolab/detail/quadrature.hpp"
#include "horolab/lattice.hpp"
#include "horolab/specialfn.hpp"

namespace horolab {

namespace {

// int_Y^inf y^{p-2} 2 theta1(t/y) dy
//   = 2 (pi t)^{p-1} [ Gamma(1-p) zeta(2-2p) - sum_n n^{2p-2} Gamma(1-p, pi t n^2 / Y) ]
// (exact; the n-sum converges exponentially). Needs Re(p) < 1/2.
cplx theta_tail_power(cplx p, double t, double Y, double eps) {
    const cplx om = 1.0 - p;
    cplx sum = gamma_fn(om) * zeta_fn(2.0 - 2.0 * p);
    for (long n = 1;; ++n) {
        const double x = kPi * t * double(n) * double(n) / Y;
        cplx term = std::pow(double(n), 2.0 * p - 2.0) * upper_incomplete_gamma(om, x);
        sum -= term;
        if (x > 3.0 && std::abs(term) < eps * 1e-3) break;
        if (n > 100000) throw numeric_error("theta_tail_power: no convergence");
    }
    return 2.0 * std::pow(kPi * t, p - 1.0) * sum;
}

// same with a log^j y factor, via central differences in p (j <= 2)
cplx theta_tail_term(const TailTerm& tt, double t, double Y, double eps) {
    if (tt.logpow == 0) return tt.coef * theta_tail_power(tt.power, t, Y, eps);
    const double h = 1e-5;
    if (tt.logpow == 1) {
        return tt.coef *
               (theta_tail_power(tt.power + h, t, Y, eps) -
                theta_tail_power(tt.power - h, t, Y, eps)) /
               (2.0 * h);
    }
    if (tt.logpow == 2) {
        return tt.coef *
               (theta_tail_power(tt.power + h, t, Y, eps) -
                2.0 * theta_tail_power(tt.power, t, Y, eps) +
                theta_tail_power(tt.power - h, t, Y, eps)) /
               (h * h);
    }
    throw validation_error("theta tail: log powers above 2 unsupported");
}

// the full-line transform of one tail term: int_0^inf y^{p-2} 2 theta1(t/y) dy
//   = 2 zeta*(2p-1) t^{p-1}, with log factors by differentiating in p
cplx theta_full_power(cplx p, double t) { return 2.0 * zeta_star(2.0 * p - 1.0) * std::pow(t, p - 1.0); }

cplx theta_full_term(const TailTerm& tt, double t) {
    if (tt.logpow == 0) return tt.coef * theta_full_power(tt.power, t);
    const double h = 1e-5;
    if (tt.logpow == 1)
        return tt.coef * (theta_full_power(tt.power + h, t) - theta_full_power(tt.power - h, t)) /
               (2.0 * h);
    if (tt.logpow == 2)
        return tt.coef *
               (theta_full_power(tt.power + h, t) - 2.0 * theta_full_power(tt.power, t) +
                theta_full_power(tt.power - h, t)) /
               (h * h);
    throw validation_error("theta transform: log powers above 2 unsupported");
}

double rapid_decay_cut(const ModularFunctionSpec& f, double t, double eps) {
    double Y = 3.0;
    while (Y < 60.0) {
        double mag = std::abs(f.exact_a0 ? f.exact_a0(Y, eps) : f.evaluator({0.25, Y}, eps));
        if (mag * (1.0 + std::sqrt(Y / t)) / (Y * Y) * Y < 0.02 * eps) break;
        Y += 1.0;
    }
    return Y;
}

void check_i_class(const ModularFunctionSpec& f, double t) {
    if (f.oracle_only)
        throw validation_error("i_of_t: growth exponents outside the polynomial class");
    if (f.growth.kind == GrowthProfile::Kind::Exponential && !f.exploratory && t <= 1.0)
        throw validation_error("i_of_t: exponential class needs t > 1");
}

cplx a0_of(const ModularFunctionSpec& f, double y, double eps) {
    if (f.exact_a0) return f.exact_a0(y, eps);
    return constant_term(f, y, TruncationBudget(eps), false);
}

}  // namespace

cplx i_of_t(const ModularFunctionSpec& f, double t, TruncationBudget budget) {
    if (!(t > 0.0) || !std::isfinite(t)) throw validation_error("i_of_t: t must be > 0");
    check_i_class(f, t);
    const double eps = budget.eps;

    double Y;
    bool tail_analytic;
    if (f.a0_decays_rapidly) {
        Y = rapid_decay_cut(f, t, eps);
        tail_analytic = false;
    } else if (!f.a0_tail.empty()) {
        Y = std::max(2.0, f.a0_tail_from);
        tail_analytic = true;
    } else {
        throw validation_error("i_of_t: no cusp description for this function");
    }

    const double y_min = kPi * t / (std::log(1.0 / eps) + 10.0);
    cplx numeric = 0.0;
    if (y_min < Y) {
        numeric = detail::adaptive_gauss(
            [&](double w) {
                const double y = std::exp(w);
                return a0_of(f, y, eps * 0.05) * 2.0 *
                       theta1(t / y, TruncationBudget(eps * 0.02)) / y;
            },
            std::log(y_min), std::log(Y), eps * 0.5);
    }
    cplx tail = 0.0;
    if (tail_analytic)
        for (const auto& tt : f.a0_tail) tail += theta_tail_term(tt, t, Y, eps);
    return numeric + tail;
}

cplx theta_pairing(const ModularFunctionSpec& f, double t, TruncationBudget budget) {
    if (!(t > 0.0) || !std::isfinite(t)) throw validation_error("theta_pairing: t must be > 0");
    if (f.oracle_only)
        throw validation_error("theta_pairing: growth exponents outside the polynomial class");
    const double eps = budget.eps;

    double decay = t;  // decay rate of the unfolded-coset remainder e^{-pi (t - beta) y}
    if (f.growth.kind == GrowthProfile::Kind::Exponential) {
        if (t <= std::max(1.0, f.growth.beta))
            throw validation_error(
                "theta_pairing: exponential class unfolds conditionally, needs t > max(1, beta)");
        decay = t - f.growth.beta;
    }

    double Y;
    bool tail_analytic;
    if (f.a0_decays_rapidly) {
        Y = rapid_decay_cut(f, t, eps);
        tail_analytic = false;
    } else {
        Y = std::max({4.0, f.a0_tail_from, (std::log(1.0 / eps) + 10.0) / (kPi * decay)});
        tail_analytic = !f.a0_tail.empty();
    }

    cplx numeric = integrate_domain_xfirst(
        [&](const HPoint& z) {
            return evaluate(f, z, TruncationBudget(eps * 0.02)) *
                   theta2(t, z, TruncationBudget(eps * 0.02)) / (z.y * z.y);
        },
        Y, eps * 0.5);

    // above Y the x integral collapses onto 2 theta1(t/y) a0(y) up to the
    // m != 0 coset modes, bounded by e^{-pi (t-beta) Y} and pushed below eps
    cplx tail = 0.0;
    if (tail_analytic)
        for (const auto& tt : f.a0_tail) tail += theta_tail_term(tt, t, Y, eps);
    return numeric + tail;
}

namespace {

struct RsSetup {
    cplx C0;
    std::vector<TailTerm> terms;  // growth ladder entering the subtraction
    double rho_rate;              // remainder decays like e^{-rho_rate * tau}
};

RsSetup rs_setup(const ModularFunctionSpec& f, double eps) {
    RsSetup s;
    if (f.oracle_only)
        throw validation_error("rs_transform: growth exponents outside the polynomial class");
    if (f.growth.kind == GrowthProfile::Kind::Exponential)
        throw validation_error("rs_transform: defined for rapid decay or polynomial growth");
    if (f.exact_C0) {
        s.C0 = *f.exact_C0;
    } else {
        s.C0 = petersson_integral(f, TruncationBudget(std::max(eps, 1e-9))).value;
    }
    if (!f.a0_decays_rapidly) s.terms = f.a0_tail;
    const double Y0 = f.a0_decays_rapidly ? 4.0 : std::max(2.0, f.a0_tail_from);
    s.rho_rate = kPi / Y0;
    return s;
}

}  // namespace

cplx rs_transform(const ModularFunctionSpec& f, cplx s, TruncationBudget budget) {
    const double eps = budget.eps;
    RsSetup setup = rs_setup(f, eps);

    // pole proximity: rational terms below blow up
    auto near = [&](cplx pole) { return std::abs(s - pole) < 1e-4; };
    if (near(0.0)) throw pole_error("R* pole at s = 0", s, -0.5 * setup.C0);
    if (near(1.0)) throw pole_error("R* pole at s = 1", s, 0.5 * setup.C0);
    for (const auto& tt : setup.terms) {
        if (tt.logpow > 0) continue;  // higher-order pole, residue not simple
        cplx resid = tt.coef * zeta_star(2.0 * tt.power - 1.0);
        if (near(tt.power)) throw pole_error("R* pole at growth exponent", s, resid);
        if (near(1.0 - tt.power))
            throw pole_error("R* pole at reflected exponent", s, -resid);
    }

    // rational part of M[i](s)
    cplx mellin = setup.C0 / (s - 1.0) - setup.C0 / s;
    for (const auto& tt : setup.terms) {
        const cplx p = tt.power;
        const int j = tt.logpow;
        double jf = 1.0;
        for (int k = 2; k <= j; ++k) jf *= k;
        // subtracted form: (d/dp)^j [2 c zeta*(2p-1) t^{p-1}]; for j = 0 the
        // Mellin pieces are j!/(1-s-p)^{j+1} + j!/(s-p)^{j+1} against the
        // zeta* coefficient. Log powers handled through the same central
        // differences used in theta_full_term, folded in below for j = 0 only;
        // builtins carry j = 0 ladders.
        if (j == 0) {
            cplx coef = tt.coef * 2.0 * zeta_star(2.0 * p - 1.0);
            mellin += coef * (1.0 / (1.0 - s - p) + 1.0 / (s - p));
        } else {
            // differentiate coef(p) (...) numerically in p
            const double h = 1e-5;
            auto piece = [&](cplx pp) {
                return tt.coef * 2.0 * zeta_star(2.0 * pp - 1.0) *
                       (1.0 / (1.0 - s - pp) + 1.0 / (s - pp)) * jf;
            };
            if (j == 1)
                mellin += (piece(p + h) - piece(p - h)) / (2.0 * h);
            else if (j == 2)
                mellin += (piece(p + h) - 2.0 * piece(p) + piece(p - h)) / (h * h);
            else
                throw validation_error("rs_transform: log powers above 2 unsupported");
        }
    }

    // remainder rho(tau) = i(tau) - sum of full-line term transforms; decays
    // like e^{-rho_rate tau}
    const double T = (std::log(1.0 / eps) + 8.0) / setup.rho_rate;
    auto rho = [&](double tau) {
        cplx r = i_of_t(f, tau, TruncationBudget(eps * 0.1));
        for (const auto& tt : setup.terms) r -= theta_full_term(tt, tau);
        return r;
    };
    mellin += detail::adaptive_gauss(
        [&](double tau) {
            return rho(tau) * (std::pow(tau, s - 1.0) + std::pow(tau, -s));
        },
        1.0, T, eps);

    return 0.5 * mellin;
}

cplx rs_residue(const ModularFunctionSpec& f, cplx s0, TruncationBudget budget) {
    const double d = 1e-3;
    cplx r1 = (cplx(d)) * rs_transform(f, s0 + d, budget);
    cplx r2 = (cplx(d / 2.0)) * rs_transform(f, s0 + d / 2.0, budget);
    return 2.0 * r2 - r1;
}

AsymptoticFitResult asymptotic_fit(const std::vector<std::pair<double, cplx>>& samples,
                                   const GrowthProfile& model, bool include_zero_terms) {
    AsymptoticFitResult out;
    if (samples.empty()) throw validation_error("asymptotic_fit: no samples");
    double y_lo = samples[0].first, y_hi = samples[0].first;
    for (const auto& s : samples) {
        y_lo = std::min(y_lo, s.first);
        y_hi = std::max(y_hi, s.first);
        if (!(s.first > 0.0) || s.first > 0.2)
            throw validation_error("asymptotic_fit: window must lie in (0, 0.2]");
    }
    out.y_window = {y_lo, y_hi};

    struct Basis {
        std::string label;
        std::function<cplx(double)> fn;
    };
    std::vector<Basis> basis;
    basis.push_back({"1", [](double) { return cplx(1.0); }});
    std::vector<PolyTerm> terms = model.terms;
    if (model.kind == GrowthProfile::Kind::Exponential)
        terms = {{1.0, model.alpha, 0}};
    for (const auto& t : terms) {
        cplx e = 1.0 - t.alpha;
        int n = t.n;
        char buf[64];
        std::snprintf(buf, sizeof buf, "y^(%.4g%+.4gi)log^%d", e.real(), e.imag(), n);
        basis.push_back({buf, [e, n](double y) {
                             return std::pow(cplx(y), e) * std::pow(std::log(y), double(n));
                         }});
    }
    if (include_zero_terms) {
        const auto& zeros = zeta_zero_table();
        for (int k = 0; k < 3 && k < int(zeros.size()); ++k) {
            double tk = zeros[k];
            char buf[64];
            std::snprintf(buf, sizeof buf, "y^0.75 cos(%.4f log y / 2)", tk);
            basis.push_back({buf, [tk](double y) {
                                 return std::pow(y, 0.75) * std::cos(0.5 * tk * std::log(y));
                             }});
            std::snprintf(buf, sizeof buf, "y^0.75 sin(%.4f log y / 2)", tk);
            basis.push_back({buf, [tk](double y) {
                                 return std::pow(y, 0.75) * std::sin(0.5 * tk * std::log(y));
                             }});
        }
    }

    const int m = int(samples.size()), k = int(basis.size());
    if (m < 3 * k)
        throw validation_error("asymptotic_fit: need >= 3x more samples than basis functions");

    Eigen::MatrixXcd M(m, k);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = samples[i].second;
        for (int j = 0; j < k; ++j) M(i, j) = basis[j].fn(samples[i].first);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXcd c = svd.solve(b);
    const auto& sv = svd.singularValues();
    out.condition_number = sv(0) / std::max(1e-300, sv(sv.size() - 1));
    out.reliable = out.condition_number <= 1e10;

    out.C0_hat = c(0);
    for (int j = 1; j < k; ++j) out.term_coeffs.emplace_back(basis[j].label, c(j));

    // residual power law by log-log regression
    Eigen::VectorXcd r = b - M * c;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < m; ++i) {
        double mag = std::abs(r(i));
        if (mag < 1e-300) continue;
        double lx = std::log(samples[i].first), ly = std::log(mag);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    out.residual_exponent =
        (cnt > 1) ? (cnt * sxy - sx * sy) / std::max(1e-300, cnt * sxx - sx * sx) : 0.0;
    return out;
}

std::vector<ProbePoint> exp_bound_probe(const ModularFunctionSpec& f,
                                        const std::vector<double>& y_grid,
                                        TruncationBudget budget, bool* outside_class) {
    if (f.growth.kind != GrowthProfile::Kind::Exponential)
        throw validation_error("exp_bound_probe: exponential class only");
    if (outside_class) *outside_class = f.growth.beta >= 1.0 || f.growth.kappa == 0;
    std::vector<ProbePoint> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) {
        double a = std::abs(a0_of(f, y, budget.eps));
        out.push_back({y, y * std::log1p(a)});
    }
    return out;
}

}  // namespace horolab
