#pragma once

#include <optional>
#include <span>
#include <vector>

#include "weyl/common.hpp"
#include "weyl/nt.hpp"

namespace weyl::sums {

// Parameters of the Weyl sum: N terms, polynomial degree k.
struct WeylParams {
    i64 N = 1;
    int k = 2;
};

// Throws InvalidInput / PrecisionError when N, k are unusable (N^k must stay
// under the 2^100 exact-phase guard).
void validate(const WeylParams &p);

// A point (x, t) on the torus, both coordinates reduced to [0,1) on
// construction.  When t is known as a fraction b/q, exact_t routes all
// n^k * t phases through exact integer arithmetic mod q.
struct PhasePoint {
    double x = 0.0;
    double t = 0.0;
    std::optional<nt::Rational> exact_t;

    static PhasePoint from(double x, double t);
    static PhasePoint with_exact_t(double x, nt::Rational t);
};

// omega_{N,k}(x,t) = sum_{n=1}^N e(n x + n^k t)
cplx eval_weyl_sum(const WeylParams &p, const PhasePoint &pt);

// S_k(u; N) = sum_{n=1}^N e(u_1 n + ... + u_k n^k), k = u.size() >= 2
cplx eval_general_sum(std::span<const double> u, i64 N);

// Complete sum over a full period: sum_{n=1}^q e((c_1 n + ... + c_k n^k)/q),
// phases reduced mod q in integer arithmetic.  coeffs[j-1] multiplies n^j.
cplx eval_complete_sum(u64 q, std::span<const i64> coeffs);

// S_k(a, b, q) = sum_{n=1}^q e((a/q) n^k + (b/q) n).
// Argument order is fixed as (coefficient of n^k, coefficient of n).
cplx eval_gauss_sum(int k, i64 a, i64 b, u64 q);

// Grid evaluators; M must be a power of two (rejected otherwise, never padded).
// grid_x: entry m = omega_{N,k}(m/M, t); grid_t: entry m = omega_{N,k}(x, m/M).
std::vector<cplx> eval_weyl_grid_x(const WeylParams &p, double t, u64 M);
std::vector<cplx> eval_weyl_grid_t(const WeylParams &p, double x, u64 M);

// Offsets from a rational center, xi.size() = k.
struct XiVector {
    std::vector<double> xi;
};

struct QuadStats {
    i64 evals = 0;
    i64 panels = 0;
    double err_estimate = 0.0;
};

// I(xi) = int_0^N e(xi_1 z + ... + xi_k z^k) dz by adaptive Gauss-Kronrod
// panels; the initial partition keeps each panel under 1/8 oscillation.
// tol <= 0 selects the default 1e-8 * N.
cplx eval_oscillatory_integral(const XiVector &xi, double N, double tol = 0.0,
                               QuadStats *stats = nullptr);

struct ArcCenter {
    u64 q = 1;
    i64 r1 = 0;  // numerator paired with x (the n coefficient)
    i64 rk = 0;  // numerator paired with t (the n^k coefficient)
};

struct MajorArcDecomposition {
    cplx main_term;
    cplx delta;
    double delta_bound = 0.0;
    cplx exact;
};

// Vaughan decomposition omega = q^{-1} S_k(r/q; q) I(xi) + Delta around the
// center (r1/q, rk/q); delta is exact - main_term by construction and
// delta_bound = q (1 + |xi_1| N + |xi_k| N^k).
MajorArcDecomposition major_arc_decompose(const WeylParams &p, const PhasePoint &pt,
                                          const ArcCenter &center, double tol = 0.0);

}  // namespace weyl::sums
