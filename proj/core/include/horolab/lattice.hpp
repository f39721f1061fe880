#pragma once

#include "horolab/types.hpp"

namespace horolab {

// eisenstein_direct refuses Re(s) closer than this to 1.
inline constexpr double kEisensteinMargin = 0.05;

// theta_1(u) = sum_{n >= 1} e^{-pi u n^2}, u > 0. Cutoff from the Gaussian
// tail bound sum_{n>N} <= e^{-pi u (N+1)^2} / (1 - e^{-pi u (2N+3)}).
double theta1(double u, TruncationBudget budget = {});

// Theta_t(z) = sum_{(m,n) in Z^2 \ 0} e^{-pi t |mz+n|^2 / y}. z is reduced
// first (the quadratic form minimum is maximal there); invariance returns the
// value for the original point.
double theta2(double t, const HPoint& z, TruncationBudget budget = {});

// E_s(z) = 1/2 sum_{gcd(c,d)=1} y^s |cz+d|^{-2s}, Re(s) >= 1 + margin.
// Row sums are Euler-Maclaurin accelerated and the coprime structure is
// factored exactly, so the requested budget is met at any admissible s.
cplx eisenstein_direct(cplx s, const HPoint& z, TruncationBudget budget = {});

// E*_s(z) = zeta*(2s) E_s(z), continued to all s outside {0, 1} via the
// split-Mellin representation
//   E*_s = 1/2 [ -1/s + 1/(s-1)
//                + sum_{(m,n) != 0} (pi Q)^{-s} G(s, pi Q) + (pi Q)^{s-1} G(1-s, pi Q) ],
// Q = |mz+n|^2 / y, G the upper incomplete gamma. Manifestly s <-> 1-s
// symmetric; simple poles at 0 and 1 with residues -1/2, +1/2.
cplx eisenstein_star(cplx s, const HPoint& z, TruncationBudget budget = {});

namespace detail_lattice {

// H(a, b, s) = sum_{k in Z} ((k+a)^2 + b^2)^{-s}, Re(s) > 1/2. Direct center
// plus Euler-Maclaurin tails with analytic tail integrals.
cplx epstein_row(double a, double b, cplx s);

// eisenstein_direct without the initial reduction (for invariance tests).
cplx eisenstein_direct_at(cplx s, const HPoint& z, double eps, bool reduce_first);

// Reference evaluator: per-pair gcd filter, no acceleration. Cost grows like
// (1/eps)^{2/(2Re s - 2)}; refuses budgets needing more than ~5e4 rows.
cplx eisenstein_naive(cplx s, const HPoint& z, double eps);

}  // namespace detail_lattice

}  // namespace horolab
