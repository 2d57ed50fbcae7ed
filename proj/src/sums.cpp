#include "weyl/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "weyl/dd.hpp"
#include "weyl/fft.hpp"

namespace weyl::sums {

void validate(const WeylParams &p) {
    if (p.N < 1) throw InvalidInput("WeylParams: N must be >= 1");
    if (p.k < 2) throw InvalidInput("WeylParams: k must be >= 2");
    checked_pow_u128(u64(p.N), p.k);  // throws PrecisionError past the guard
}

namespace {

inline double reduce01(double v) {
    v -= std::floor(v);
    if (v >= 1.0) v -= 1.0;  // floor(v) can round to v for v just below 1
    if (v < 0.0) v += 1.0;
    return v;
}

inline cplx cis_turn(double frac_phase) {
    double a = TWO_PI * frac_phase;
    return cplx(std::cos(a), std::sin(a));
}

}  // namespace

PhasePoint PhasePoint::from(double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) throw InvalidInput("PhasePoint: non-finite coordinate");
    PhasePoint p;
    p.x = reduce01(x);
    p.t = reduce01(t);
    return p;
}

PhasePoint PhasePoint::with_exact_t(double x, nt::Rational t) {
    PhasePoint p;
    p.x = reduce01(x);
    i64 r = t.num % t.den;
    if (r < 0) r += t.den;
    p.exact_t = nt::Rational::reduced(r, t.den);
    p.t = double(p.exact_t->num) / double(p.exact_t->den);
    return p;
}

cplx eval_weyl_sum(const WeylParams &p, const PhasePoint &pt) {
    validate(p);
    cplx acc = 0.0;
    if (pt.exact_t) {
        const u64 q = u64(pt.exact_t->den);
        i64 braw = pt.exact_t->num % i64(q);
        if (braw < 0) braw += i64(q);
        const u64 b = u64(braw);
        for (i64 n = 1; n <= p.N; ++n) {
            u64 nk = nt::powmod(u64(n) % q, u64(p.k), q);
            double ph_t = double(nt::mulmod(b, nk, q)) / double(q);
            double ph = ph_t + frac_int_times_real(u64(n), pt.x);
            acc += cis_turn(ph >= 1.0 ? ph - 1.0 : ph);
        }
    } else {
        for (i64 n = 1; n <= p.N; ++n) {
            double ph = frac_int_times_real(pow_u128(u64(n), p.k), pt.t) +
                        frac_int_times_real(u64(n), pt.x);
            acc += cis_turn(ph >= 1.0 ? ph - 1.0 : ph);
        }
    }
    return acc;
}

cplx eval_general_sum(std::span<const double> u, i64 N) {
    const int k = int(u.size());
    if (k < 2) throw InvalidInput("eval_general_sum: need k >= 2 coefficients");
    if (N < 1) throw InvalidInput("eval_general_sum: N must be >= 1");
    checked_pow_u128(u64(N), k);
    cplx acc = 0.0;
    for (i64 n = 1; n <= N; ++n) {
        DD ph{0.0, 0.0};
        u128 np = 1;
        for (int j = 0; j < k; ++j) {
            np *= u64(n);
            if (u[size_t(j)] != 0.0)
                ph = dd_frac(dd_add(ph, DD{frac_int_times_real(np, u[size_t(j)]), 0.0}));
        }
        acc += cis_turn(reduce01(ph.hi + ph.lo));
    }
    return acc;
}

cplx eval_complete_sum(u64 q, std::span<const i64> coeffs) {
    if (q < 1) throw InvalidInput("eval_complete_sum: q must be >= 1");
    std::vector<u64> c(coeffs.size());
    for (size_t j = 0; j < coeffs.size(); ++j) {
        i64 r = coeffs[j] % i64(q);
        if (r < 0) r += i64(q);
        c[j] = u64(r);
    }
    // root table: e(r/q) for r in [0, q)
    std::vector<cplx> roots(q);
    for (u64 r = 0; r < q; ++r) roots[r] = cis_turn(double(r) / double(q));
    cplx acc = 0.0;
    for (u64 n = 1; n <= q; ++n) {
        u64 ph = 0, pw = 1;
        for (size_t j = 0; j < c.size(); ++j) {
            pw = nt::mulmod(pw, n % q, q);
            if (c[j]) ph = (ph + nt::mulmod(c[j], pw, q)) % q;
        }
        acc += roots[ph];
    }
    return acc;
}

cplx eval_gauss_sum(int k, i64 a, i64 b, u64 q) {
    if (k < 2) throw InvalidInput("eval_gauss_sum: k must be >= 2");
    if (q < 1) throw InvalidInput("eval_gauss_sum: q must be >= 1");
    std::vector<i64> coeffs(size_t(k), 0);
    coeffs.front() = b;  // n coefficient
    coeffs.back() = a;   // n^k coefficient
    return eval_complete_sum(q, coeffs);
}

namespace {

std::vector<cplx> grid_transform(u64 M, std::span<const u64> idx, std::span<const cplx> coeff) {
    if (!is_pow2(M)) throw InvalidInput("grid size M must be a power of two");
    int lg = 0;
    while ((u64(1) << lg) < M) ++lg;
    std::vector<cplx> data(M, cplx(0.0, 0.0));
    std::vector<u64> rev(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        rev[i] = bit_reverse(idx[i], lg);
        data[rev[i]] += coeff[i];
    }
    std::sort(rev.begin(), rev.end());
    rev.erase(std::unique(rev.begin(), rev.end()), rev.end());
    fft_pow2_prereversed(data, rev, +1);
    return data;
}

}  // namespace

std::vector<cplx> eval_weyl_grid_x(const WeylParams &p, double t, u64 M) {
    validate(p);
    if (!is_pow2(M)) throw InvalidInput("grid size M must be a power of two");
    t = reduce01(t);
    std::vector<u64> idx(size_t(p.N));
    std::vector<cplx> coeff(size_t(p.N));
    for (i64 n = 1; n <= p.N; ++n) {
        idx[size_t(n - 1)] = u64(n) & (M - 1);  // n mod M
        coeff[size_t(n - 1)] = cis_turn(frac_int_times_real(pow_u128(u64(n), p.k), t));
    }
    return grid_transform(M, idx, coeff);
}

std::vector<cplx> eval_weyl_grid_t(const WeylParams &p, double x, u64 M) {
    validate(p);
    if (!is_pow2(M)) throw InvalidInput("grid size M must be a power of two");
    x = reduce01(x);
    std::vector<u64> idx(size_t(p.N));
    std::vector<cplx> coeff(size_t(p.N));
    for (i64 n = 1; n <= p.N; ++n) {
        idx[size_t(n - 1)] = u64(pow_u128(u64(n) & (M - 1), p.k) & (M - 1));  // n^k mod M
        coeff[size_t(n - 1)] = cis_turn(frac_int_times_real(u64(n), x));
    }
    return grid_transform(M, idx, coeff);
}

// ---------------------------------------------------------------------------
// Oscillatory integral: adaptive Gauss-Kronrod (G7, K15)
// ---------------------------------------------------------------------------

namespace {

// Kronrod-15 abscissae (nonnegative half) and weights; Gauss-7 weights sit at
// the odd Kronrod nodes.
constexpr double XGK[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double WGK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    cplx integral;
    double err;
};

struct Quad {
    std::span<const double> xi;
    double tol_per_len;
    i64 evals = 0;
    i64 panels = 0;
    i64 panel_budget;
    cplx total = 0.0;
    double err_total = 0.0;

    cplx f(double z) const {
        double ph = 0.0;
        for (size_t j = xi.size(); j-- > 0;) ph = ph * z + xi[j];
        ph *= z;
        double a = TWO_PI * ph;
        return cplx(std::cos(a), std::sin(a));
    }

    PanelResult gk15(double a, double b) {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        cplx resg = 0.0, resk = 0.0;
        for (int i = 0; i < 8; ++i) {
            cplx fv;
            if (i == 7) {
                fv = f(c);
                resk += WGK[7] * fv;
                resg += WG[3] * fv;
            } else {
                cplx f1 = f(c - h * XGK[i]), f2 = f(c + h * XGK[i]);
                resk += WGK[i] * (f1 + f2);
                if (i % 2 == 1) resg += WG[i / 2] * (f1 + f2);
            }
        }
        evals += 15;
        return {resk * h, std::abs(resk - resg) * std::abs(h)};
    }

    void adapt(double a, double b, int depth) {
        PanelResult r = gk15(a, b);
        ++panels;
        if (panels > panel_budget)
            throw QuadratureError("oscillatory integral: panel budget exhausted",
                                  err_total + r.err);
        if (r.err <= tol_per_len * (b - a) || depth >= 48 || (b - a) < 1e-15 * std::abs(b) + 1e-300) {
            total += r.integral;
            err_total += r.err;
            return;
        }
        double m = 0.5 * (a + b);
        adapt(a, m, depth + 1);
        adapt(m, b, depth + 1);
    }
};

}  // namespace

cplx eval_oscillatory_integral(const XiVector &xiv, double N, double tol, QuadStats *stats) {
    if (!(N > 0.0)) throw InvalidInput("eval_oscillatory_integral: N must be > 0");
    if (xiv.xi.empty()) throw InvalidInput("eval_oscillatory_integral: xi must be nonempty");
    if (tol <= 0.0) tol = 1e-8 * N;

    // Phi(z) = sum_j |xi_j| z^j grows monotonically; cut panels at 1/8 turn.
    auto phi = [&](double z) {
        double acc = 0.0;
        for (size_t j = xiv.xi.size(); j-- > 0;) acc = acc * z + std::abs(xiv.xi[j]);
        return acc * z;
    };
    const double osc_total = phi(N);
    const i64 panel_budget = 1 << 21;
    if (8.0 * osc_total > double(panel_budget) / 2)
        throw QuadratureError("oscillatory integral: phase has too many oscillations for the panel budget",
                              std::numeric_limits<double>::infinity());

    std::vector<double> cuts{0.0};
    double z = 0.0;
    while (z < N) {
        double target = phi(z) + 0.125;
        if (phi(N) <= target) {
            cuts.push_back(N);
            break;
        }
        double lo = z, hi = N;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) < target ? lo : hi) = mid;
        }
        z = std::max(hi, z + N * 1e-12);
        cuts.push_back(std::min(z, N));
    }
    if (cuts.back() != N) cuts.push_back(N);

    Quad quad{std::span<const double>(xiv.xi), tol / N, 0, 0, panel_budget};
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) quad.adapt(cuts[i], cuts[i + 1], 0);
    if (stats) *stats = {quad.evals, quad.panels, quad.err_total};
    return quad.total;
}

MajorArcDecomposition major_arc_decompose(const WeylParams &p, const PhasePoint &pt,
                                          const ArcCenter &center, double tol) {
    validate(p);
    if (center.q < 1) throw InvalidInput("major_arc_decompose: q must be >= 1");
    u64 g = std::gcd(center.q, u64(center.r1 < 0 ? -center.r1 : center.r1));
    g = std::gcd(g, u64(center.rk < 0 ? -center.rk : center.rk));
    if (g != 1) throw InvalidInput("major_arc_decompose: invalid center, gcd(q, r1, rk) != 1");

    const double xi1 = pt.x - double(center.r1) / double(center.q);
    const double xik = pt.t - double(center.rk) / double(center.q);
    XiVector xi;
    xi.xi.assign(size_t(p.k), 0.0);
    xi.xi.front() = xi1;
    xi.xi.back() = xik;

    std::vector<i64> coeffs(size_t(p.k), 0);
    coeffs.front() = center.r1;
    coeffs.back() = center.rk;
    cplx s = eval_complete_sum(center.q, coeffs);

    MajorArcDecomposition d;
    cplx integral = eval_oscillatory_integral(xi, double(p.N), tol > 0 ? tol : 1e-9 * double(p.N));
    d.main_term = s * integral / double(center.q);
    d.exact = eval_weyl_sum(p, pt);
    d.delta = d.exact - d.main_term;
    const double nk = std::pow(double(p.N), double(p.k));
    d.delta_bound = double(center.q) * (1.0 + std::abs(xi1) * double(p.N) + std::abs(xik) * nk);
    return d;
}

}  // namespace weyl::sums
