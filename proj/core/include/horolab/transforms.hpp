#pragma once

#include <string>
#include <utility>
#include <vector>

#include "horolab/modfun.hpp"

namespace horolab {

// i(t) = <theta kernel, a0> on U\H with the two-sided kernel
// sum_{r != 0} e^{-pi r^2 t / y} = 2 theta1(t/y). Under this normalization the
// theta pairing unfolds to i(t) exactly, i(t) = (1/t) i(1/t) + C0/t - C0, and
// the large-t law reads i(t) ~ sum_i 2 c_i/n_i! zeta*(2 alpha_i - 1) t^{alpha_i-1} log^n t.
// Numeric on [y_min, tail_from], exact incomplete-gamma closed forms beyond.
cplx i_of_t(const ModularFunctionSpec& f, double t, TruncationBudget budget = {});

// <Theta_t, f> over the fundamental domain, inner x integration first.
// Exponential class requires t > max(1, beta).
cplx theta_pairing(const ModularFunctionSpec& f, double t, TruncationBudget budget = {});

// Continued Rankin-Selberg transform R*(f, s) = zeta*(2s) M[a0/y - phi/y](s),
// computed as half the Mellin transform of i(t) with the growth terms
// subtracted analytically on both (0,1] and [1,inf): each subtraction yields
// the rational pole terms, the remainder integrals are exponentially small.
// Poles: s in {0, 1} (residues -C0/2, +C0/2) and s in {p, 1-p} per growth
// term (residues +c zeta*(2p-1), -c zeta*(2p-1)). Throws pole_error within
// 1e-4 of a pole.
cplx rs_transform(const ModularFunctionSpec& f, cplx s, TruncationBudget budget = {});

// (s - s0) R*(f, s) extrapolated to s0 by two-point Richardson.
cplx rs_residue(const ModularFunctionSpec& f, cplx s0, TruncationBudget budget = {});

struct AsymptoticFitResult {
    cplx C0_hat{};
    std::vector<std::pair<std::string, cplx>> term_coeffs;
    double residual_exponent = 0.0;
    double condition_number = 0.0;
    std::pair<double, double> y_window{0.0, 0.0};
    bool reliable = true;  // full rank and condition number below 1e10
};

// Least squares of a0-samples on {1} u {y^{1-alpha_i} log^{n_i} y} and
// optionally the zeta-zero oscillation pairs y^{3/4} cos/sin((t_k/2) log y),
// k <= 3. Needs >= 3x more samples than basis functions, window in (0, 0.2].
AsymptoticFitResult asymptotic_fit(const std::vector<std::pair<double, cplx>>& samples,
                                   const GrowthProfile& model,
                                   bool include_zero_terms = false);

struct ProbePoint {
    double y;
    double value;  // y log(1 + |a0(y)|)
};

// Diagnostic sequence for the exponential-class growth bound; the bound
// predicts decay to 0 as y -> 0. outside_class reports beta >= 1 inputs.
std::vector<ProbePoint> exp_bound_probe(const ModularFunctionSpec& f,
                                        const std::vector<double>& y_grid,
                                        TruncationBudget budget = {},
                                        bool* outside_class = nullptr);

}  // namespace horolab
