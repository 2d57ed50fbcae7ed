#pragma once

#include <optional>
#include <span>
#include <vector>

#include "weyl/common.hpp"
#include "weyl/nt.hpp"
#include "weyl/sums.hpp"

namespace weyl::maximal {

struct SupOptions {
    int oversample = 8;          // t-grid density factor over N^k
    u64 budget = u64(1) << 27;   // max complex grid points per sup call
    int threads = 0;             // 0 = OpenMP default; used by sweeps only
};

struct MaximalValue {
    double value = 0.0;
    double t_star = 0.0;
    u64 grid_size = 0;
    bool refined = false;
};

// sup_{0<t<1} |omega_{N,k}(x,t)| via a dense t-grid of size
// next_pow2(oversample * N^k) and parabolic refinement of the argmax.
// Ties break toward the smallest grid t.  Throws ResourceError (naming the
// minimum budget) when oversample * N^k exceeds options.budget.
MaximalValue sup_over_t(const sums::WeylParams &p, double x, const SupOptions &opt = {});

// Independent sup calls over a batch of x values; deterministic output
// regardless of thread count.
std::vector<double> sup_profile(const sums::WeylParams &p, std::span<const double> xs,
                                const SupOptions &opt = {});

// Weighted x-grid: uniform m/g points plus (optionally) the Farey fractions
// r/q with q <= farey_qmax; weights are torus interval midpoints.
struct XGrid {
    std::vector<nt::Rational> nodes;  // sorted, unique, in [0,1)
    std::vector<double> x;
    std::vector<double> weight;
};
XGrid make_x_grid(i64 g, int farey_qmax);

double lp_norm_from_profile(std::span<const double> sup, std::span<const double> weight, double p);

// Riemann approximation of || sup_t |omega| ||_{L^p} on the uniform x-grid.
// Requires x_grid >= 4N.
double lp_norm_max(const sums::WeylParams &p, double lp, i64 x_grid, const SupOptions &opt = {});

struct LevelSetReport {
    double A = 0.0;
    double measure = 0.0;      // fraction of x-grid points with sup > A
    double paper_bound = 0.0;  // N^k A^{-(k+1)}, epsilon dropped
    double ratio = 0.0;
};
LevelSetReport superlevel_from_profile(const sums::WeylParams &p, std::span<const double> sup,
                                       double A);
LevelSetReport superlevel_measure(const sums::WeylParams &p, double A, i64 x_grid,
                                  const SupOptions &opt = {});

struct LayerCakeResult {
    double direct = 0.0;         // mean of F^p
    double reconstructed = 0.0;  // exact dyadic layer-cake on the samples
    double lemma_bound = 0.0;    // nu M^p + N^a M^(p-b) log N + N^(p+a-b)
};
LayerCakeResult layer_cake_integral(std::span<const double> F, double p, double M,
                                    double N_cap, double a, double b);

struct MajorArc {
    u64 q = 1;
    i64 r1 = 0;  // x-side numerator
    i64 rk = 0;  // t-side numerator
    double x_radius = 0.0, t_radius = 0.0;                  // plain radii
    double x_radius_refined = 0.0, t_radius_refined = 0.0;  // decomposition-refined
    nt::ModulusDecomposition decomposition;
    bool contains_x = false, contains_t = false;
    bool contains_x_refined = false, contains_t_refined = false;
};

struct LocateDiagnostics {
    u64 q_found = 0;
    double q_bound = 0.0;
    bool within_bound = false;
};

// Rational-approximation search for the major arc containing (x, t), given
// that |omega(x,t)| >= A and A > N^(1 - 1/D), D = min(2^(k-1), k(k-1)).
// Returns nullopt (with diagnostics) when the constructed q misses the bound.
std::optional<MajorArc> locate_major_arc(const sums::WeylParams &p, const sums::PhasePoint &pt,
                                         double A, double eps_report,
                                         LocateDiagnostics *diag = nullptr);

double theorem_upper_exponent(int k, double p);  // 1/2 + s_{p,k}
double theorem_lower_exponent(double p);         // 1/2 + gamma_p
double conjecture_exponent(int k, double p);     // conditional, threshold k+1

struct ExponentFit {
    int k = 3;
    double p = 2.0;
    std::vector<i64> N_values;
    std::vector<double> norm_values;
    std::vector<double> doubling_delta;  // per-N relative change under grid doubling
    double fitted_slope = 0.0;
    double predicted_upper = 0.0;
    double predicted_lower = 0.0;
    double predicted_conditional = 0.0;
};

// per-N sweep data, exposed so downstream consumers (level sets, reports)
// can reuse the sup values instead of recomputing them
struct FitProfile {
    i64 N = 0;
    XGrid grid;
    std::vector<double> sup;
};

struct FitOptions {
    i64 x_grid_mult = 8;   // uniform x points per unit N
    bool farey = true;     // inject Farey points with q <= sqrt(N)
    SupOptions sup;
    std::vector<FitProfile> *profile_sink = nullptr;
};

ExponentFit exponent_fit(int k, double p, std::span<const i64> Ns, const FitOptions &opt = {});
// Shares the sup profiles across several p values.
std::vector<ExponentFit> exponent_fit_multi(int k, std::span<const double> ps,
                                            std::span<const i64> Ns, const FitOptions &opt = {});

struct ConjectureScanResult {
    double max_ratio = 0.0;
    double max_ratio_random = 0.0;
    double max_ratio_rational = 0.0;
    i64 samples_random = 0;
    i64 samples_rational = 0;
    u64 seed = 0;
};

// |omega| against N (1/q + q/N^k)^(1/k) over random points and rational-t
// points; q from dirichlet_approx(t, N^(k/2)).  Report-only.
ConjectureScanResult conjecture_scan(int k, i64 N, i64 samples, u64 seed, int threads = 0);

}  // namespace weyl::maximal
