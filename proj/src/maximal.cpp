#include "weyl/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "weyl/dd.hpp"
#include "weyl/fft.hpp"
#include "weyl/parallel.hpp"

namespace weyl::maximal {

namespace {

struct SupScratch {
    std::vector<cplx> sub;
    std::vector<u64> rev;
    std::vector<std::pair<u64, cplx>> nz;  // (index mod M, coefficient)
};

// Max of |sum_n e(nx) e(n^k m / M)|^2 over the t-grid m/M, with the argmax.
// The input support is [0, N^k], so the M-point spectrum is computed as
// P = M/S frequency-decimated transforms of cache-resident size
// S = next_pow2(N^k): entry m = P m' + j comes from the S-point transform of
// the coefficients premodulated by e(r j / M).  Ties go to the smallest m.
std::pair<double, u64> tgrid_max(const sums::WeylParams &p, double x, u64 M, SupScratch &sc) {
    u128 nk = pow_u128(u64(p.N), p.k);
    u64 S = next_pow2(u64(std::min<u128>(nk, M)));
    if (S > M) S = M;
    const u64 P = M / S;
    int lgS = 0;
    while ((u64(1) << lgS) < S) ++lgS;

    sc.nz.clear();
    sc.nz.reserve(size_t(p.N));
    for (i64 n = 1; n <= p.N; ++n) {
        u64 idx = u64(pow_u128(u64(n) & (M - 1), p.k) & (M - 1));
        double a = TWO_PI * frac_int_times_real(u64(n), x);
        sc.nz.emplace_back(idx, cplx(std::cos(a), std::sin(a)));
    }

    double best2 = -1.0;
    u64 best = 0;
    for (u64 j = 0; j < P; ++j) {
        sc.sub.assign(S, cplx(0.0, 0.0));
        sc.rev.clear();
        for (auto &[r, v] : sc.nz) {
            double ang = TWO_PI * (double(u64(u128(r) * j & (M - 1))) / double(M));
            u64 pos = bit_reverse(r & (S - 1), lgS);
            sc.sub[pos] += v * cplx(std::cos(ang), std::sin(ang));
            sc.rev.push_back(pos);
        }
        std::sort(sc.rev.begin(), sc.rev.end());
        sc.rev.erase(std::unique(sc.rev.begin(), sc.rev.end()), sc.rev.end());
        fft_pow2_prereversed(sc.sub, sc.rev, +1);
        for (u64 mp = 0; mp < S; ++mp) {
            double v2 = std::norm(sc.sub[mp]);
            if (v2 > best2) {
                best2 = v2;
                best = mp * P + j;
            } else if (v2 == best2 && mp * P + j < best) {
                best = mp * P + j;
            }
        }
    }
    return {best2, best};
}

MaximalValue sup_with_scratch(const sums::WeylParams &p, double x, const SupOptions &opt,
                              SupScratch &sc) {
    sums::validate(p);
    if (opt.oversample < 4) throw InvalidInput("sup_over_t: oversample must be >= 4");
    u128 need = u128(opt.oversample) * pow_u128(u64(p.N), p.k);
    if (need > opt.budget) {
        u64 minb = next_pow2(u64(std::min<u128>(need, u128(1) << 62)));
        throw ResourceError("sup_over_t: oversample*N^k = " + std::to_string(double(need)) +
                                " exceeds budget " + std::to_string(opt.budget) +
                                "; minimum budget " + std::to_string(minb),
                            minb);
    }
    const u64 M = next_pow2(u64(need));
    auto [best2, best] = tgrid_max(p, x, M, sc);
    const double grid_val = std::sqrt(best2);

    // parabolic vertex on |omega|^2 through the three neighboring grid points
    auto y_at = [&](u64 m) {
        return std::norm(sums::eval_weyl_sum(p, sums::PhasePoint::from(x, double(m) / double(M))));
    };
    double y0 = y_at(best);
    double ym = y_at((best + M - 1) & (M - 1));
    double yp = y_at((best + 1) & (M - 1));
    double denom = ym - 2.0 * y0 + yp;
    MaximalValue out;
    out.grid_size = M;
    if (denom < 0.0) {
        double delta = 0.5 * (ym - yp) / denom;
        delta = std::clamp(delta, -0.5, 0.5);
        double t_ref = (double(best) + delta) / double(M);
        if (t_ref < 0.0) t_ref += 1.0;
        if (t_ref >= 1.0) t_ref -= 1.0;
        double v_ref = std::abs(sums::eval_weyl_sum(p, sums::PhasePoint::from(x, t_ref)));
        if (v_ref >= grid_val) {
            out.value = v_ref;
            out.t_star = t_ref;
            out.refined = true;
            return out;
        }
    }
    out.value = grid_val;
    out.t_star = double(best) / double(M);
    out.refined = false;
    return out;
}

}  // namespace

MaximalValue sup_over_t(const sums::WeylParams &p, double x, const SupOptions &opt) {
    SupScratch sc;
    return sup_with_scratch(p, x, opt, sc);
}

std::vector<double> sup_profile(const sums::WeylParams &p, std::span<const double> xs,
                                const SupOptions &opt) {
    std::vector<double> out(xs.size());
    const int threads = resolve_threads(opt.threads);
#pragma omp parallel num_threads(threads)
    {
        SupScratch sc;
#pragma omp for schedule(dynamic, 1)
        for (i64 i = 0; i < i64(xs.size()); ++i)
            out[size_t(i)] = sup_with_scratch(p, xs[size_t(i)], opt, sc).value;
    }
    return out;
}

XGrid make_x_grid(i64 g, int farey_qmax) {
    if (g < 1) throw InvalidInput("make_x_grid: grid size must be >= 1");
    std::vector<nt::Rational> nodes;
    nodes.reserve(size_t(g));
    for (i64 m = 0; m < g; ++m) nodes.push_back(nt::Rational::reduced(m, g));
    for (i64 q = 1; q <= farey_qmax; ++q)
        for (i64 r = 0; r < q; ++r)
            if (std::gcd(r, q) == 1) nodes.push_back(nt::Rational{r, q});
    auto lt = [](const nt::Rational &a, const nt::Rational &b) {
        return i128(a.num) * b.den < i128(b.num) * a.den;
    };
    std::sort(nodes.begin(), nodes.end(), lt);
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    XGrid grid;
    grid.nodes = std::move(nodes);
    const size_t n = grid.nodes.size();
    grid.x.resize(n);
    grid.weight.resize(n);
    for (size_t i = 0; i < n; ++i) grid.x[i] = grid.nodes[i].value();
    for (size_t i = 0; i < n; ++i) {
        double prev = i == 0 ? grid.x[n - 1] - 1.0 : grid.x[i - 1];
        double next = i + 1 == n ? grid.x[0] + 1.0 : grid.x[i + 1];
        grid.weight[i] = 0.5 * (next - prev);
    }
    return grid;
}

double lp_norm_from_profile(std::span<const double> sup, std::span<const double> weight,
                            double p) {
    if (sup.size() != weight.size()) throw InvalidInput("profile/weight size mismatch");
    if (!(p >= 1.0)) throw InvalidInput("lp norm: p must be >= 1");
    double acc = deterministic_sum(i64(sup.size()), 1, [&](i64 i) {
        return weight[size_t(i)] * std::pow(sup[size_t(i)], p);
    });
    return std::pow(acc, 1.0 / p);
}

double lp_norm_max(const sums::WeylParams &p, double lp, i64 x_grid, const SupOptions &opt) {
    sums::validate(p);
    if (x_grid < 4 * p.N) throw InvalidInput("lp_norm_max: x_grid must be >= 4N");
    std::vector<double> xs(static_cast<size_t>(x_grid));
    for (i64 m = 0; m < x_grid; ++m) xs[size_t(m)] = double(m) / double(x_grid);
    std::vector<double> prof = sup_profile(p, xs, opt);
    double acc = deterministic_sum(i64(prof.size()), 1, [&](i64 i) {
        return std::pow(prof[size_t(i)], lp);
    });
    return std::pow(acc / double(x_grid), 1.0 / lp);
}

LevelSetReport superlevel_from_profile(const sums::WeylParams &p, std::span<const double> sup,
                                       double A) {
    if (!(A > 0.0) || A > double(p.N)) throw InvalidInput("superlevel: need 0 < A <= N");
    i64 count = 0;
    for (double v : sup)
        if (v > A) ++count;
    LevelSetReport rep;
    rep.A = A;
    rep.measure = double(count) / double(sup.size());
    rep.paper_bound = std::pow(double(p.N), double(p.k)) * std::pow(A, -double(p.k + 1));
    rep.ratio = rep.measure / rep.paper_bound;
    return rep;
}

LevelSetReport superlevel_measure(const sums::WeylParams &p, double A, i64 x_grid,
                                  const SupOptions &opt) {
    sums::validate(p);
    if (x_grid < 1) throw InvalidInput("superlevel_measure: x_grid must be >= 1");
    std::vector<double> xs(static_cast<size_t>(x_grid));
    for (i64 m = 0; m < x_grid; ++m) xs[size_t(m)] = double(m) / double(x_grid);
    std::vector<double> prof = sup_profile(p, xs, opt);
    return superlevel_from_profile(p, prof, A);
}

LayerCakeResult layer_cake_integral(std::span<const double> F, double p, double M,
                                    double N_cap, double a, double b) {
    if (F.empty()) throw InvalidInput("layer_cake: empty sample set");
    if (!(p > 0.0)) throw InvalidInput("layer_cake: p must be > 0");
    if (!(M > 0.0) || M > N_cap) throw InvalidInput("layer_cake: need 0 < M <= N_cap");
    for (double v : F)
        if (!(v >= 0.0) || v > N_cap) throw InvalidInput("layer_cake: sample out of [0, N_cap]");

    const double n = double(F.size());
    LayerCakeResult r;
    r.direct = deterministic_sum(i64(F.size()), 1, [&](i64 i) {
        return std::pow(F[size_t(i)], p);
    }) / n;
    // below M the samples contribute exactly; above M they are rounded up to
    // the next dyadic level 2^(j+1) M, which is the lemma's split
    r.reconstructed = deterministic_sum(i64(F.size()), 1, [&](i64 i) {
        double v = F[size_t(i)];
        if (v < M) return std::pow(v, p);
        double level = 2.0 * M;
        while (v >= level) level *= 2.0;
        return std::pow(level, p);
    }) / n;
    r.lemma_bound = std::pow(M, p) + std::pow(N_cap, a) * std::pow(M, p - b) * std::log(N_cap) +
                    std::pow(N_cap, p + a - b);
    return r;
}

namespace {

double torus_dist(double u, double v) {
    double d = std::abs(u - v);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

std::optional<MajorArc> locate_major_arc(const sums::WeylParams &p, const sums::PhasePoint &pt,
                                         double A, double eps_report, LocateDiagnostics *diag) {
    sums::validate(p);
    const double D = std::min(std::pow(2.0, p.k - 1), double(p.k) * double(p.k - 1));
    const double threshold = std::pow(double(p.N), 1.0 - 1.0 / D);
    if (!(A > threshold))
        throw InvalidInput("locate_major_arc: require A > N^(1-1/D)");
    const double mag = std::abs(sums::eval_weyl_sum(p, pt));
    if (mag < A * (1.0 - 1e-9))
        throw InvalidInput("locate_major_arc: |omega(x,t)| < A at this point");

    // approximate t first (M = A^k, the epsilon-free proof choice), then q0*x
    const double Mt = std::min(std::pow(A, double(p.k)), 4.0e15);
    nt::Rational rt = nt::dirichlet_approx(pt.t, std::max(1.0, Mt));
    const u64 q0 = u64(rt.den);
    nt::Rational rx = nt::dirichlet_approx(double(q0) * pt.x, 2.0 * p.k * p.k);

    MajorArc arc;
    arc.q = q0 * u64(rx.den);
    arc.r1 = rx.num;
    arc.rk = rt.num * rx.den;

    const double base = std::pow(double(p.N) / A, double(p.k));
    const double qbound = base * std::pow(double(p.N), eps_report);
    if (diag) {
        diag->q_found = arc.q;
        diag->q_bound = qbound;
        diag->within_bound = double(arc.q) <= qbound;
    }
    if (double(arc.q) > qbound) return std::nullopt;

    arc.x_radius = base * std::pow(double(p.N), -1.0 + eps_report) / double(arc.q);
    arc.t_radius = base * std::pow(double(p.N), -double(p.k) + eps_report) / double(arc.q);
    arc.decomposition = nt::decompose_modulus(arc.q, p.k);
    double prodfac = 1.0;
    for (int j = 2; j <= p.k; ++j)
        prodfac *= std::pow(double(arc.decomposition.part(j)), -double(p.k) / double(j));
    arc.x_radius_refined = base * std::pow(double(p.N), -1.0 + eps_report) * prodfac;
    arc.t_radius_refined = base * std::pow(double(p.N), -double(p.k) + eps_report) * prodfac;

    const double cx = double(arc.r1) / double(arc.q);
    const double ct = double(arc.rk) / double(arc.q);
    arc.contains_x = torus_dist(pt.x, cx) <= arc.x_radius;
    arc.contains_t = torus_dist(pt.t, ct) <= arc.t_radius;
    arc.contains_x_refined = torus_dist(pt.x, cx) <= arc.x_radius_refined;
    arc.contains_t_refined = torus_dist(pt.t, ct) <= arc.t_radius_refined;
    return arc;
}

double theorem_upper_exponent(int k, double p) {
    if (k < 3) throw InvalidInput("theorem_upper_exponent: k must be >= 3");
    const double pk = std::min(std::pow(2.0, k - 1), double(k) * double(k - 1));
    const double s = p <= pk ? 0.5 - 1.0 / pk : 0.5 - 1.0 / p;
    return 0.5 + s;
}

double theorem_lower_exponent(double p) {
    const double g = p <= 4.0 ? 0.25 : 0.5 - 1.0 / p;
    return 0.5 + g;
}

double conjecture_exponent(int k, double p) {
    const double s = p <= double(k + 1) ? 0.5 - 1.0 / double(k + 1) : 0.5 - 1.0 / p;
    return 0.5 + s;
}

std::vector<ExponentFit> exponent_fit_multi(int k, std::span<const double> ps,
                                            std::span<const i64> Ns, const FitOptions &opt) {
    if (Ns.size() < 3) throw InvalidInput("exponent_fit: need at least 3 values of N");
    if (ps.empty()) throw InvalidInput("exponent_fit: need at least one p");

    std::vector<ExponentFit> fits(ps.size());
    for (size_t pi = 0; pi < ps.size(); ++pi) {
        fits[pi].k = k;
        fits[pi].p = ps[pi];
        fits[pi].N_values.assign(Ns.begin(), Ns.end());
        fits[pi].predicted_upper = theorem_upper_exponent(k, ps[pi]);
        fits[pi].predicted_lower = theorem_lower_exponent(ps[pi]);
        fits[pi].predicted_conditional = conjecture_exponent(k, ps[pi]);
    }

    for (i64 N : Ns) {
        sums::WeylParams params{N, k};
        sums::validate(params);
        const int qmax = opt.farey ? int(std::sqrt(double(N))) : 0;
        const i64 g = opt.x_grid_mult * N;
        XGrid fine = make_x_grid(2 * g, qmax);
        std::vector<double> prof = sup_profile(params, fine.x, opt.sup);
        if (opt.profile_sink) opt.profile_sink->push_back({N, fine, prof});

        // the base grid (uniform g plus the same Farey points) is a subset
        std::vector<size_t> base_idx;
        for (size_t i = 0; i < fine.nodes.size(); ++i) {
            const auto &nd = fine.nodes[i];
            if (g % nd.den == 0 || nd.den <= qmax) base_idx.push_back(i);
        }
        std::vector<double> bx(base_idx.size()), bs(base_idx.size());
        for (size_t i = 0; i < base_idx.size(); ++i) {
            bx[i] = fine.x[base_idx[i]];
            bs[i] = prof[base_idx[i]];
        }
        std::vector<double> bw(base_idx.size());
        for (size_t i = 0; i < base_idx.size(); ++i) {
            const size_t n = base_idx.size();
            double prev = i == 0 ? bx[n - 1] - 1.0 : bx[i - 1];
            double next = i + 1 == n ? bx[0] + 1.0 : bx[i + 1];
            bw[i] = 0.5 * (next - prev);
        }

        for (size_t pi = 0; pi < ps.size(); ++pi) {
            double norm_fine = lp_norm_from_profile(prof, fine.weight, ps[pi]);
            double norm_base = lp_norm_from_profile(bs, bw, ps[pi]);
            fits[pi].norm_values.push_back(norm_fine);
            fits[pi].doubling_delta.push_back(std::abs(norm_fine - norm_base) /
                                              std::max(norm_fine, 1e-300));
        }
    }

    for (auto &fit : fits) {
        // least-squares slope of log norm vs log N
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = double(fit.N_values.size());
        for (size_t i = 0; i < fit.N_values.size(); ++i) {
            double lx = std::log(double(fit.N_values[i]));
            double ly = std::log(fit.norm_values[i]);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        fit.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return fits;
}

ExponentFit exponent_fit(int k, double p, std::span<const i64> Ns, const FitOptions &opt) {
    double ps[1] = {p};
    return exponent_fit_multi(k, ps, Ns, opt)[0];
}

ConjectureScanResult conjecture_scan(int k, i64 N, i64 samples, u64 seed, int threads) {
    sums::WeylParams params{N, k};
    sums::validate(params);
    if (samples < 1) throw InvalidInput("conjecture_scan: samples must be >= 1");

    const double Mdir = std::min(std::pow(double(N), double(k) / 2.0), 4.0e15);
    auto ratio_at = [&](double x, double t, const nt::Rational *exact_t) {
        nt::Rational rt = nt::dirichlet_approx(t, std::max(1.0, Mdir));
        const double q = double(rt.den);
        const double bound =
            double(N) * std::pow(1.0 / q + q / std::pow(double(N), double(k)), 1.0 / double(k));
        const sums::PhasePoint pt = exact_t ? sums::PhasePoint::with_exact_t(x, *exact_t)
                                            : sums::PhasePoint::from(x, t);
        return std::abs(sums::eval_weyl_sum(params, pt)) / bound;
    };

    ConjectureScanResult res;
    res.seed = seed;
    res.samples_random = samples;

    // random part: fixed chunking, per-chunk rng, deterministic max
    const i64 chunks = std::min<i64>(samples, 64);
    std::vector<double> cmax(size_t(chunks), 0.0);
    parallel_for(chunks, threads, [&](i64 c) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * u64(c + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        i64 lo = samples * c / chunks, hi = samples * (c + 1) / chunks;
        double best = 0.0;
        for (i64 i = lo; i < hi; ++i) {
            double x = uni(rng), t = uni(rng);
            best = std::max(best, ratio_at(x, t, nullptr));
        }
        cmax[size_t(c)] = best;
    });
    for (double v : cmax) res.max_ratio_random = std::max(res.max_ratio_random, v);

    // rational part: t = a/q for q <= N, one random x each
    std::vector<std::pair<i64, i64>> rats;
    for (i64 q = 1; q <= N; ++q)
        for (i64 a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1) rats.emplace_back(a, q);
    res.samples_rational = i64(rats.size());
    const i64 rchunks = std::min<i64>(i64(rats.size()), 64);
    std::vector<double> rmax(size_t(rchunks), 0.0);
    parallel_for(rchunks, threads, [&](i64 c) {
        std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ULL ^ (0x9e3779b97f4a7c15ULL * u64(c + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        i64 lo = i64(rats.size()) * c / rchunks, hi = i64(rats.size()) * (c + 1) / rchunks;
        double best = 0.0;
        for (i64 i = lo; i < hi; ++i) {
            auto [a, q] = rats[size_t(i)];
            nt::Rational t{a, q};
            best = std::max(best, ratio_at(uni(rng), double(a) / double(q), &t));
        }
        rmax[size_t(c)] = best;
    });
    for (double v : rmax) res.max_ratio_rational = std::max(res.max_ratio_rational, v);

    res.max_ratio = std::max(res.max_ratio_random, res.max_ratio_rational);
    return res;
}

}  // namespace weyl::maximal
