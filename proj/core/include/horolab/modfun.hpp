#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "horolab/types.hpp"

namespace horolab {

// One growth term c/n! * y^alpha * log^n y.
struct PolyTerm {
    cplx c;
    cplx alpha;
    int n = 0;
};

struct GrowthProfile {
    enum class Kind { RapidDecay, Polynomial, Exponential };
    Kind kind = Kind::RapidDecay;
    std::vector<PolyTerm> terms;  // Polynomial
    cplx alpha{0.0};              // Exponential: y^alpha e^{pi beta y} e^{2 pi i kappa x}
    double beta = 0.0;
    int kappa = 0;

    static GrowthProfile rapid_decay();
    // validates Re(alpha_i) < 1/2
    static GrowthProfile polynomial(std::vector<PolyTerm> terms);
    // validates beta < 1, kappa != 0, Re(alpha) < 1/2
    static GrowthProfile exponential(cplx alpha, double beta, int kappa);
};

// coef * y^power * log(y)^logpow: one term of the exact large-y form of a0(y).
struct TailTerm {
    cplx coef;
    cplx power;
    int logpow = 0;
};

struct ModularFunctionSpec {
    std::string name;
    GrowthProfile growth;
    // (z, eps) -> f(z); reduces internally.
    std::function<cplx(const HPoint&, double)> evaluator;
    // (y, eps) -> a0(y); empty when no closed/unfolded form exists.
    std::function<cplx(double, double)> exact_a0;
    // log|f(z)| evaluator that stays finite where f overflows doubles.
    std::function<double(const HPoint&, double)> log_abs;
    std::optional<cplx> exact_C0;

    // a0(y) = sum of a0_tail terms for y >= a0_tail_from, up to an
    // exponentially small remainder (exactly, for the Poincare builtins).
    std::vector<TailTerm> a0_tail;
    double a0_tail_from = std::numeric_limits<double>::infinity();
    bool a0_decays_rapidly = false;  // no power tail at the cusp

    bool oracle_only = false;   // growth exponents outside the polynomial class
    bool exploratory = false;   // outside the exponential class bounds
};

struct BuiltinParams {
    cplx alpha = 0.0;
    double beta = 0.0;
    int kappa = 0;
    int n = 0;        // log power (poincare_typeII)
    double s0 = 1.5;  // eisenstein_fixed
};

// name in {delta_cusp, eisenstein_fixed, poincare_typeII, poincare_heterotic,
// j_invariant}. Parameters outside the class invariants throw validation_error.
ModularFunctionSpec make_builtin(const std::string& name, const BuiltinParams& p = {});

cplx evaluate(const ModularFunctionSpec& f, const HPoint& z, TruncationBudget budget = {});

// a0(y) = int_0^1 f(x+iy) dx by node-doubling periodic quadrature; the exact
// unfolded form is used instead when present and allowed.
cplx constant_term(const ModularFunctionSpec& f, double y, TruncationBudget budget = {},
                   bool use_exact = true);

struct PeterssonResult {
    cplx value{};
    double err_est = 0.0;
    bool profile_mismatch = false;  // sampled cusp behavior disagrees with the profile
};

// C0 = int_D f dmu, x-first ordering, analytic tail above the numeric cut.
PeterssonResult petersson_integral(const ModularFunctionSpec& f, TruncationBudget budget = {});

// shared x-first integrator: int_{D, y <= y_cut} g(z) dx dy (plain measure;
// fold y^{-2} into g). The x slice is exact for the arc region y < 1.
cplx integrate_domain_xfirst(const std::function<cplx(const HPoint&)>& g, double y_cut,
                             double eps);

// q-expansion oracles (never hardcoded): Ramanujan tau(1..n_max) from the
// discriminant product, and j-invariant coefficients c(-1..n_max) from
// E4^3/Delta. Exact integers within double range.
std::vector<double> ramanujan_tau(int n_max);
std::vector<double> j_coefficients(int n_max);

namespace detail_modfun {
// Reference Poincare evaluator: gcd-filtered coset double loop, no
// acceleration. Cost grows like y/eps; for tests and benchmarks.
cplx poincare_direct_reference(cplx alpha, double beta, int kappa, int n, const HPoint& z,
                               double eps);
// internal probes used by tests
cplx poincare_debug_mode(cplx alpha, double beta, int kappa, int r, double y, double eps);
cplx poincare_debug_boundary(cplx alpha, double beta, int kappa, double x, double y);
cplx poincare_debug_modeJ(cplx alpha, double beta, int kappa, int c, int r, double y,
                          double eps);
}  // namespace detail_modfun

}  // namespace horolab
