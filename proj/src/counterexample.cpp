#include "weyl/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "weyl/dd.hpp"
#include "weyl/nt.hpp"
#include "weyl/parallel.hpp"
#include "weyl/sums.hpp"

namespace weyl::counterexample {

GoodSetCensus good_set_census(int k, u64 q, int threads) {
    if (q < 3 || !nt::is_prime(q)) throw InvalidInput("good_set_census: q must be an odd prime >= 3");
    if (u64(k) % q == 0) throw InvalidInput("good_set_census: q must not divide k");

    GoodSetCensus c;
    c.k = k;
    c.q = q;
    c.counts_per_b.assign(q, 0);

    std::vector<cplx> roots(q);
    for (u64 r = 0; r < q; ++r) {
        double a = TWO_PI * double(r) / double(q);
        roots[r] = cplx(std::cos(a), std::sin(a));
    }
    std::vector<u64> nk(q + 1);
    for (u64 n = 1; n <= q; ++n) nk[n] = nt::powmod(n, u64(k), q);

    // census is integer-exact up to complex round-off; keep a hair of slack
    // so threshold-straddling round-off cannot flip a count
    const double thr = 0.5 * std::sqrt(double(q)) * (1.0 - 1e-9);

    parallel_for(i64(q), threads, [&](i64 bi) {
        const u64 b = u64(bi) + 1;
        std::vector<u64> phb(q + 1);
        for (u64 n = 1; n <= q; ++n) phb[n] = nt::mulmod(b, nk[n], q);
        i64 cnt = 0;
        for (u64 a = 1; a <= q; ++a) {
            cplx s = 0.0;
            u64 an = 0;
            for (u64 n = 1; n <= q; ++n) {
                an += a;
                if (an >= q) an -= q;
                u64 ph = phb[n] + an;
                if (ph >= q) ph -= q;
                s += roots[ph];
            }
            if (std::abs(s) >= thr) ++cnt;
        }
        c.counts_per_b[size_t(bi)] = cnt;
    });

    c.total = 0;
    i64 best = -1;
    for (u64 b = 1; b <= q; ++b) {
        i64 cnt = c.counts_per_b[size_t(b - 1)];
        c.total += cnt;
        if (cnt > best) { best = cnt; c.best_b = i64(b); }
    }
    return c;
}

double interval_height(i64 N, int k, u64 q, i64 a, i64 b) {
    const double rx = 1.0 / (100.0 * double(N));
    const double rt = 1.0 / (100.0 * double(pow_u128(u64(N), k)));
    const sums::WeylParams params{N, k};
    double inf_val = std::numeric_limits<double>::infinity();
    for (int i = -4; i <= 4; ++i) {
        const double x = double(a) / double(q) + double(i) * (rx / 4.0);
        double sup_val = 0.0;
        for (int j = -8; j <= 8; ++j) {
            sums::PhasePoint pt =
                j == 0 ? sums::PhasePoint::with_exact_t(x, nt::Rational{b, i64(q)})
                       : sums::PhasePoint::from(x, double(b) / double(q) + double(j) * (rt / 8.0));
            sup_val = std::max(sup_val, std::abs(sums::eval_weyl_sum(params, pt)));
        }
        inf_val = std::min(inf_val, sup_val);
    }
    return inf_val;
}

LowerBoundCertificate build_certificate(i64 N, int k, double c1, int threads) {
    if (N < 4) throw InvalidInput("build_certificate: N too small");
    if (!(c1 > 0.0 && c1 <= 1.0)) throw InvalidInput("build_certificate: c1 must be in (0,1]");
    sums::validate({N, k});

    LowerBoundCertificate cert;
    cert.N = N;
    cert.k = k;
    cert.c1 = c1;
    cert.target = std::pow(double(N), 0.75);

    const double sq = std::sqrt(double(N));
    const u64 lo = u64(std::ceil(c1 * sq - 1e-9));
    const u64 hi = u64(std::floor(sq + 1e-9));
    for (u64 p : nt::primes_in(lo, hi, threads))
        if (p >= 3 && u64(k) % p != 0) cert.primes.push_back(p);
    if (cert.primes.empty())
        throw InvalidInput("build_certificate: no admissible prime in [c1 sqrt(N), sqrt(N)]; "
                           "increase N or decrease c1");

    const double rx = 1.0 / (100.0 * double(N));
    for (u64 q : cert.primes) {
        GoodSetCensus cen = good_set_census(k, q, threads);
        const i64 b = cen.best_b;
        cert.chosen_b.emplace_back(q, b);
        // good set of the chosen b, restricted to 1 <= a < q
        const double thr = 0.5 * std::sqrt(double(q)) * (1.0 - 1e-9);
        for (i64 a = 1; a < i64(q); ++a) {
            if (std::abs(sums::eval_gauss_sum(k, b, a, q)) < thr) continue;
            CertInterval iv;
            iv.q = q;
            iv.a = a;
            iv.b = b;
            iv.center = double(a) / double(q);
            iv.radius = rx;
            cert.intervals.push_back(iv);
        }
    }

    // distinct primes cannot share a center a1/q1 = a2/q2, but the floats
    // that follow assume it, so drop both copies if it ever happens
    std::map<std::pair<i64, i64>, int> seen;
    for (const auto &iv : cert.intervals) {
        i64 g = std::gcd(iv.a, i64(iv.q));
        ++seen[{iv.a / g, i64(iv.q) / g}];
    }
    std::erase_if(cert.intervals, [&](const CertInterval &iv) {
        i64 g = std::gcd(iv.a, i64(iv.q));
        return seen[{iv.a / g, i64(iv.q) / g}] > 1;
    });

    parallel_for(i64(cert.intervals.size()), threads, [&](i64 i) {
        auto &iv = cert.intervals[size_t(i)];
        iv.height = interval_height(N, k, iv.q, iv.a, iv.b);
    });

    cert.l1_lower = deterministic_sum(i64(cert.intervals.size()), 1, [&](i64 i) {
        const auto &iv = cert.intervals[size_t(i)];
        return 2.0 * iv.radius * iv.height;
    });
    return cert;
}

CertVerification verify_certificate(const LowerBoundCertificate &cert, u64 seed, int threads) {
    CertVerification v;
    if (cert.intervals.empty()) {
        v.theta = 0.0;
        v.ratio = 0.0;
        return v;
    }
    const sums::WeylParams params{cert.N, cert.k};
    const double rx = 1.0 / (100.0 * double(cert.N));
    const double rt = 1.0 / (100.0 * double(pow_u128(u64(cert.N), cert.k)));

    std::vector<double> theta_per(cert.intervals.size());
    parallel_for(i64(cert.intervals.size()), threads, [&](i64 i) {
        const auto &iv = cert.intervals[size_t(i)];
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * u64(i + 1)));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double mn = std::abs(sums::eval_weyl_sum(
            params, sums::PhasePoint::with_exact_t(iv.center, nt::Rational{iv.b, i64(iv.q)})));
        for (int s = 0; s < 8; ++s) {
            double x = iv.center + uni(rng) * rx;
            double t = double(iv.b) / double(iv.q) + uni(rng) * rt;
            mn = std::min(mn, std::abs(sums::eval_weyl_sum(params, sums::PhasePoint::from(x, t))));
        }
        theta_per[size_t(i)] = mn * std::sqrt(double(iv.q)) / double(cert.N);
    });
    v.theta = *std::min_element(theta_per.begin(), theta_per.end());
    v.points_sampled = i64(cert.intervals.size()) * 9;

    std::vector<double> heights(cert.intervals.size());
    parallel_for(i64(cert.intervals.size()), threads, [&](i64 i) {
        const auto &iv = cert.intervals[size_t(i)];
        heights[size_t(i)] = interval_height(cert.N, cert.k, iv.q, iv.a, iv.b);
    });
    v.l1_recomputed = deterministic_sum(i64(cert.intervals.size()), 1, [&](i64 i) {
        return 2.0 * cert.intervals[size_t(i)].radius * heights[size_t(i)];
    });
    v.rel_diff = std::abs(v.l1_recomputed - cert.l1_lower) /
                 std::max(std::abs(cert.l1_lower), 1e-300);
    v.ratio = v.l1_recomputed / std::pow(double(cert.N), 0.75);
    return v;
}

double trivial_lower_bound(i64 N, int k, double p) {
    sums::validate({N, k});
    if (!(p >= 1.0)) throw InvalidInput("trivial_lower_bound: p must be >= 1");
    const sums::WeylParams params{N, k};
    const double xmax = 1e-6 / double(N);
    const double tmax = 1e-6 / double(pow_u128(u64(N), k));
    double inf_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            double x = xmax * double(i) / 15.0;
            double t = tmax * double(j) / 15.0;
            inf_val = std::min(inf_val, std::abs(sums::eval_weyl_sum(params, sums::PhasePoint::from(x, t))));
        }
    if (inf_val < 0.99 * double(N))
        throw InvalidInput("trivial_lower_bound: interference box failed the 0.99N check");
    return 0.99 * double(N) * std::pow(1e-6 / double(N), 1.0 / p);
}

}  // namespace weyl::counterexample
