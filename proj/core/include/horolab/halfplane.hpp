#pragma once

#include <cstdint>
#include <vector>

#include "horolab/types.hpp"

namespace horolab {

// Boundary tie tolerance of the fundamental domain: |x| = 1/2 accepted only
// at x = -1/2, |z| = 1 only with x <= 0.
inline constexpr double kDomainTol = 1e-12;
inline constexpr int kReduceIterCap = 10000;
// Below this height the Mobius arithmetic runs in compensated (double-double)
// form: |cz+d|^2 cancels catastrophically near rationals.
inline constexpr double kCompensatedFloor = 1e-6;

// (a z + b) / (c z + d). Rejects non-unimodular matrices.
HPoint mobius_apply(const UniMatrix& m, const HPoint& z);

// Closed-domain membership |x| <= 1/2 + tol, x^2 + y^2 >= 1 - tol.
bool in_fundamental_domain(const HPoint& z, double tol = kDomainTol) noexcept;

// Gauss reduction: translate x into [-1/2, 1/2), invert while |z| < 1.
// Returns the canonical representative (ties broken as above), the matrix
// gamma with gamma(input) = point, and the number of inversion rounds.
ReductionResult reduce_to_fundamental(HPoint z);

// Hyperbolic area of a coordinate box.
double box_area(const Box& u);

// Reduces the midpoint samples x_k = (k + 1/2)/n + iy, k = 0..n-1.
// Deterministic and index-ordered for any thread count.
std::vector<ReductionResult> horocycle_image(double y, std::int64_t n, int threads = 0);

}  // namespace horolab
