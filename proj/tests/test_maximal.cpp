#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "weyl/dd.hpp"
#include "weyl/maximal.hpp"
#include "weyl/parallel.hpp"

using namespace weyl;
using maximal::SupOptions;
using sums::PhasePoint;
using sums::WeylParams;

TEST_CASE("sup_over_t trivial points") {
    for (auto [N, k] : {std::pair<i64, int>{16, 3}, {9, 4}}) {
        auto mv = maximal::sup_over_t({N, k}, 0.0);
        CHECK(mv.value == doctest::Approx(double(N)).epsilon(1e-9));
        CHECK(mv.t_star < 1.0 / double(mv.grid_size) + 1e-12);
    }
    auto one = maximal::sup_over_t({1, 3}, 0.37);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sup_over_t budget error names the minimum budget") {
    SupOptions opt;
    opt.budget = 1 << 16;
    try {
        (void)maximal::sup_over_t({32, 3}, 0.41, opt);  // needs 8*32^3 = 2^18
        FAIL("expected ResourceError");
    } catch (const ResourceError &e) {
        CHECK(e.minimum_budget == (u64(1) << 18));
    }
}

TEST_CASE("sup_over_t against 2^24 brute-force grid") {
    // independent oracle: direct summation over the dense t-grid
    const WeylParams p{32, 3};
    const double x = 0.41;
    const u64 M = u64(1) << 24;
    const i64 chunks = 1 << 10;
    std::vector<double> best(chunks, 0.0);
    parallel_for(chunks, 0, [&](i64 c) {
        u64 lo = M / u64(chunks) * u64(c), hi = M / u64(chunks) * u64(c + 1);
        double b = 0.0;
        for (u64 m = lo; m < hi; ++m) {
            double t = double(m) / double(M);
            double re = 0.0, im = 0.0;
            for (i64 n = 1; n <= p.N; ++n) {
                double ph = TWO_PI * (frac_int_times_real(u64(n), x) +
                                      frac_int_times_real(pow_u128(u64(n), 3), t));
                re += std::cos(ph);
                im += std::sin(ph);
            }
            b = std::max(b, re * re + im * im);
        }
        best[size_t(c)] = b;
    });
    double oracle = 0.0;
    for (double b : best) oracle = std::max(oracle, b);
    oracle = std::sqrt(oracle);

    auto mv = maximal::sup_over_t(p, x);
    CHECK(std::abs(mv.value - oracle) < 1e-3 * double(p.N));
    CHECK(mv.value == doctest::Approx(std::abs(sums::eval_weyl_sum(
                          p, PhasePoint::from(x, mv.t_star)))).epsilon(1e-6));
}

TEST_CASE("sup dominates sampled values") {
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double x : {0.0, 0.21, 0.411, 2.0 / 3.0}) {
        WeylParams p{24, 3};
        auto mv = maximal::sup_over_t(p, x);
        for (int i = 0; i < 100; ++i) {
            double t = uni(rng);
            double v = std::abs(sums::eval_weyl_sum(p, PhasePoint::from(x, t)));
            CHECK(mv.value >= v - 1e-6 * double(p.N));
        }
    }
}

TEST_CASE("sup_profile is thread-count independent") {
    WeylParams p{16, 3};
    std::vector<double> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(double(i) / 40.0);
    SupOptions one;
    one.threads = 1;
    SupOptions two;
    two.threads = 2;
    auto a = maximal::sup_profile(p, xs, one);
    auto b = maximal::sup_profile(p, xs, two);
    for (size_t i = 0; i < xs.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("lp_norm_max bounds") {
    WeylParams p{64, 3};
    double n2 = maximal::lp_norm_max(p, 2.0, 280, {});
    CHECK(n2 <= 64.0 * (1.0 + 1e-9));
    // trivial lower bound N^{1-1/p} with measured constant >= 0.01
    CHECK(n2 >= 0.01 * std::pow(64.0, 0.5));
    CHECK_THROWS_AS((void)maximal::lp_norm_max(p, 2.0, 128, {}), InvalidInput);  // < 4N
}

TEST_CASE("lp_norm converges under grid doubling (N=64, p=2)") {
    WeylParams p{64, 3};
    double base = maximal::lp_norm_max(p, 2.0, 512, {});
    double dbl = maximal::lp_norm_max(p, 2.0, 1024, {});
    CHECK(std::abs(base - dbl) / dbl < 0.02);
}

TEST_CASE("superlevel measure basics") {
    WeylParams p{32, 3};
    std::vector<double> xs;
    const int g = 64;
    for (int i = 0; i < g; ++i) xs.push_back(double(i) / g);
    auto prof = maximal::sup_profile(p, xs, {});
    // just below N: x = 0, and x = 1/2 where t = 1/2 realigns every phase
    // (n + n^3 is even), both reach |omega| = N exactly
    auto top = maximal::superlevel_from_profile(p, prof, double(p.N) * (1.0 - 1e-9));
    CHECK(top.measure == doctest::Approx(2.0 / g).epsilon(1e-12));
    // nonincreasing in A along a descending ladder
    double prev = -1.0;
    for (double e : {0.95, 0.9, 0.85, 0.8}) {
        auto rep = maximal::superlevel_from_profile(p, prof, std::pow(double(p.N), e));
        CHECK(rep.measure >= prev - 1e-15);
        prev = rep.measure;
        CHECK(rep.ratio == doctest::Approx(rep.measure / rep.paper_bound));
    }
}

TEST_CASE("layer cake: trivial and uniform cases") {
    std::vector<double> c(500, 0.75);
    auto r = maximal::layer_cake_integral(c, 2.0, 0.9, 1.0, 3.0, 4.0);
    CHECK(r.direct == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(r.reconstructed == doctest::Approx(0.5625).epsilon(1e-12));

    std::vector<double> z(100, 0.0);
    auto rz = maximal::layer_cake_integral(z, 2.0, 0.5, 1.0, 3.0, 4.0);
    CHECK(rz.direct == 0.0);
    CHECK(rz.reconstructed == 0.0);

    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> u(10000);
    for (auto &v : u) v = uni(rng);
    auto ru = maximal::layer_cake_integral(u, 2.0, 0.5, 1.0, 3.0, 4.0);
    CHECK(std::abs(ru.direct - 1.0 / 3.0) < 0.02 / 3.0);

    std::vector<double> bad{0.5, 1.5};
    CHECK_THROWS_AS((void)maximal::layer_cake_integral(bad, 2.0, 0.5, 1.0, 3.0, 4.0),
                    InvalidInput);
}

TEST_CASE("layer cake sandwich on random sample sets") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        double Ncap = 1.0 + uni(rng) * 99.0;
        double M = Ncap * (0.05 + 0.9 * uni(rng));
        double p = 0.5 + 3.0 * uni(rng);
        size_t n = 50 + size_t(uni(rng) * 500);
        std::vector<double> F(n);
        for (auto &v : F) v = std::pow(uni(rng), 2.0) * Ncap;
        auto r = maximal::layer_cake_integral(F, p, M, Ncap, 3.0, 4.0);
        CHECK(r.direct <= r.reconstructed * (1.0 + 1e-6));
        CHECK(r.reconstructed <= std::pow(2.0, p) * r.direct + std::pow(M, p));
    }
}

TEST_CASE("locate_major_arc at exact rational points") {
    WeylParams p{60, 3};
    auto arc0 = maximal::locate_major_arc(p, PhasePoint::from(0, 0), 30.0, 0.0);
    REQUIRE(arc0.has_value());
    CHECK(arc0->q == 1);
    CHECK(arc0->r1 == 0);
    CHECK(arc0->rk == 0);
    CHECK(arc0->contains_x);
    CHECK(arc0->contains_t);

    // at (1/3, 1/3) the complete period sums to zero, so |omega| = 0 and the
    // level precondition cannot hold; (1/3, 2/3) realigns fully instead
    WeylParams p81{81, 3};
    CHECK(std::abs(sums::eval_weyl_sum(p81, PhasePoint::from(1.0 / 3.0, 1.0 / 3.0))) < 1e-8);
    double A = std::abs(sums::eval_weyl_sum(p81, PhasePoint::from(1.0 / 3.0, 2.0 / 3.0)));
    CHECK(A == doctest::Approx(81.0).epsilon(1e-9));
    CHECK(A > std::pow(81.0, 0.75));  // A > N^(1-1/D) really holds here
    // at A = N the Prop 2.3 bound is N^eps, so eps must cover q = 3
    auto arc = maximal::locate_major_arc(p81, PhasePoint::from(1.0 / 3.0, 2.0 / 3.0), A, 0.3);
    REQUIRE(arc.has_value());
    CHECK((arc->q == 1 || arc->q == 3));
    u64 g = std::gcd(arc->q, u64(std::abs(arc->r1)));
    g = std::gcd(g, u64(std::abs(arc->rk)));
    CHECK(g == 1);

    CHECK_THROWS_AS((void)maximal::locate_major_arc(p81, PhasePoint::from(0.5, 0.29), 2.0, 0.0),
                    InvalidInput);  // A below N^(1-1/D)
}

TEST_CASE("planted major arc recovery >= 99%") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const i64 N = 256;
    const int k = 3;
    WeylParams p{N, k};
    const double D = std::min(std::pow(2.0, k - 1), double(k * (k - 1)));
    int recovered = 0, trials = 0, attempts = 0;
    while (trials < 1000 && attempts < 20000) {
        ++attempts;
        u64 q = 1 + rng() % u64(std::pow(double(N), 0.25));
        i64 r1 = i64(rng() % q), rk = i64(rng() % q);
        u64 g = std::gcd(q, std::gcd(u64(r1), u64(rk)));
        if (g != 1) continue;
        // offsets small enough that the planted fraction stays the last
        // convergent below M_t = A^k <= N^k (and q1 = 1 on the x side)
        double dx = (uni(rng) * 2.0 - 1.0) / (80.0 * double(q));
        double dt = (uni(rng) * 2.0 - 1.0) /
                    (5.0 * double(q) * std::pow(double(N), double(k)));
        double x = double(r1) / double(q) + dx;
        double t = double(rk) / double(q) + dt;
        double mag = std::abs(sums::eval_weyl_sum(p, PhasePoint::from(x, t)));
        if (mag <= std::pow(double(N), 1.0 - 1.0 / D) * 1.05) continue;  // S_k ~ 0 center
        ++trials;
        auto arc = maximal::locate_major_arc(p, PhasePoint::from(x, t), mag, 0.35);
        if (!arc) continue;
        // centers live on the torus: reduce numerators mod den before comparing
        auto reduce = [](i64 num, i64 den) {
            num = ((num % den) + den) % den;
            i64 g2 = std::gcd(num, den);
            return g2 ? std::pair{num / g2, den / g2} : std::pair{num, den};
        };
        auto [pr1, pq1] = reduce(r1, i64(q));
        auto [ar1, aq1] = reduce(arc->r1, i64(arc->q));
        auto [prk, pqk] = reduce(rk, i64(q));
        auto [ark, aqk] = reduce(arc->rk, i64(arc->q));
        if (pr1 == ar1 && pq1 == aq1 && prk == ark && pqk == aqk) ++recovered;
    }
    REQUIRE(trials == 1000);
    MESSAGE("planted-arc recovery: ", recovered, "/1000");
    CHECK(recovered >= 990);
}

TEST_CASE("exponent predictions from the theorems") {
    CHECK(maximal::theorem_upper_exponent(3, 2.0) == doctest::Approx(0.75));
    CHECK(maximal::theorem_lower_exponent(2.0) == doctest::Approx(0.75));
    CHECK(maximal::theorem_upper_exponent(3, 8.0) == doctest::Approx(0.875));
    CHECK(maximal::theorem_lower_exponent(8.0) == doctest::Approx(0.875));
    CHECK(maximal::theorem_upper_exponent(4, 2.0) == doctest::Approx(0.875));  // p_4 = 8
    CHECK(maximal::conjecture_exponent(3, 2.0) == doctest::Approx(0.75));      // threshold k+1
    CHECK(maximal::conjecture_exponent(4, 2.0) == doctest::Approx(0.8));
    CHECK(maximal::conjecture_exponent(3, 8.0) == doctest::Approx(0.875));
}

TEST_CASE("exponent_fit on small N") {
    std::vector<i64> Ns{8, 16, 32, 64};
    maximal::FitOptions opt;
    auto fit = maximal::exponent_fit(3, 2.0, Ns, opt);
    CHECK(fit.norm_values.size() == 4);
    CHECK(fit.predicted_upper == doctest::Approx(0.75));
    CHECK(fit.predicted_lower == doctest::Approx(0.75));
    MESSAGE("fitted slope (k=3, p=2, N<=64): ", fit.fitted_slope);
    CHECK(fit.fitted_slope > 0.5);
    CHECK(fit.fitted_slope < 1.0);
    for (double d : fit.doubling_delta) CHECK(d < 0.02);
    std::vector<i64> tooFew{8, 16};
    CHECK_THROWS_AS((void)maximal::exponent_fit(3, 2.0, tooFew, opt), InvalidInput);
}

TEST_CASE("conjecture_scan basics") {
    auto r = maximal::conjecture_scan(3, 16, 500, 12345);
    MESSAGE("conjecture scan max ratio at N=16: ", r.max_ratio);
    CHECK(r.max_ratio <= 4.0);  // the conjectured bound carries an implicit constant
    CHECK(r.max_ratio > 0.0);
    CHECK(r.max_ratio == std::max(r.max_ratio_random, r.max_ratio_rational));
    // (t=1/2, x=0): phase parity alternates with n, so the terms cancel
    sums::WeylParams p{16, 3};
    CHECK(std::abs(sums::eval_weyl_sum(p, PhasePoint::with_exact_t(0.0, {1, 2}))) < 1e-9);
    auto r2 = maximal::conjecture_scan(3, 16, 500, 12345);
    CHECK(r.max_ratio == r2.max_ratio);
}
