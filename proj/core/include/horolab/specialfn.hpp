#pragma once

#include <vector>

#include "horolab/types.hpp"

namespace horolab {

// Gamma function: Lanczos approximation, reflection for Re(s) < 1/2.
// Relative error below ~1e-13 for |s| <= 50. Throws pole_error at
// nonpositive integers (residue (-1)^n / n!).
cplx gamma_fn(cplx s);

// Riemann zeta. Euler-Maclaurin for Re(s) > 1.25; accelerated alternating
// (eta) series in the critical strip; functional-equation reflection for
// Re(s) <= 0. Supported for |Im s| <= 60. Throws pole_error at s = 1.
cplx zeta_fn(cplx s);

// Completed zeta: zeta*(s) = pi^{-s/2} Gamma(s/2) zeta(s). Satisfies
// zeta*(s) = zeta*(1-s). Simple poles at s = 0, 1 with residues -1, +1
// (reported via pole_error when hit exactly).
cplx zeta_star(cplx s);

// Upper incomplete gamma Gamma(s, x), complex s, real x > 0 (entire in s).
// Continued fraction for x >= |s| + 1.5, series complement otherwise, with a
// dedicated route near nonpositive integer s where the complement cancels.
cplx upper_incomplete_gamma(cplx s, double x);

// Lower incomplete gamma(s, x) = Gamma(s) - Gamma(s, x); s not a nonpositive
// integer.
cplx lower_incomplete_gamma(cplx s, double x);

// Hurwitz zeta sum_{k>=0} (k+a)^{-w}, Re(w) > 1, a > 0.
cplx hurwitz_zeta(cplx w, double a);

// Imaginary parts t_k of the first zeros 1/2 + i t_k of zeta on the critical
// line, ascending. Located at first use by sign-change bisection of
// t -> Re zeta*(1/2 + it); cached, never hardcoded.
const std::vector<double>& zeta_zero_table();

// t_k for the k-th zero (k >= 1). Throws validation_error past the table.
double zeta_zero_find(int k);

}  // namespace horolab
