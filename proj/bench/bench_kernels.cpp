// Compares the OpenMP kernels against their serial runs and the fast FFT
// path against the dense reference.  Every pair is required to agree
// bit-for-bit; the deterministic chunked reductions make that possible for
// any thread count.
//
//   ./weyl_bench [threads]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "weyl/counterexample.hpp"
#include "weyl/dd.hpp"
#include "weyl/fft.hpp"
#include "weyl/maximal.hpp"
#include "weyl/nt.hpp"
#include "weyl/sums.hpp"

using namespace weyl;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double timed(F &&f) {
    double t0 = now_ms();
    f();
    return now_ms() - t0;
}

void report(const char *name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-34s %10.1f ms %10.1f ms   %5.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char **argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    std::printf("kernel benchmark, serial vs %d threads\n", threads);
    std::printf("%-34s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        counterexample::GoodSetCensus a, b;
        double ts = timed([&] { a = counterexample::good_set_census(3, 101, 1); });
        double tp = timed([&] { b = counterexample::good_set_census(3, 101, threads); });
        report("good_set_census q=101", ts, tp,
               a.counts_per_b == b.counts_per_b && a.total == b.total);
    }

    {
        sums::WeylParams p{48, 3};
        std::vector<double> xs;
        for (int i = 0; i < 96; ++i) xs.push_back(double(i) / 96.0);
        maximal::SupOptions o1, o2;
        o1.threads = 1;
        o2.threads = threads;
        std::vector<double> a, b;
        double ts = timed([&] { a = maximal::sup_profile(p, xs, o1); });
        double tp = timed([&] { b = maximal::sup_profile(p, xs, o2); });
        report("sup_profile N=48, 96 points", ts, tp, a == b);
    }

    {
        std::vector<u64> a, b;
        double ts = timed([&] { a = nt::primes_in(100000000, 102000000, 1); });
        double tp = timed([&] { b = nt::primes_in(100000000, 102000000, threads); });
        report("segmented sieve, 2e6 window", ts, tp, a == b);
    }

    {
        // quadratic Gauss magnitude sweep, whole table per modulus
        auto sweep = [](int nthreads, std::vector<double> &out) {
            out.assign(121, 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
            for (u64 q = 1; q <= 120; ++q) {
                double worst = 0.0;
                for (u64 aa = 1; aa <= q; ++aa) {
                    if (std::gcd(aa, q) != 1) continue;
                    for (u64 bb = 0; bb < q; ++bb)
                        worst = std::max(worst,
                                         std::abs(sums::eval_gauss_sum(2, i64(aa), i64(bb), q)));
                }
                out[size_t(q)] = worst;
            }
        };
        std::vector<double> a, b;
        double ts = timed([&] { sweep(1, a); });
        double tp = timed([&] { sweep(threads, b); });
        report("gauss table sweep q<=120", ts, tp, a == b);
    }

    {
        // sparse-start FFT vs dense reference on a grid-sum style input
        const u64 M = u64(1) << 22;
        const int lg = 22;
        const i64 N = 256;
        std::vector<cplx> dense(M), sparse(M);
        std::vector<u64> rev;
        auto fill = [&] {
            std::fill(dense.begin(), dense.end(), cplx(0, 0));
            std::fill(sparse.begin(), sparse.end(), cplx(0, 0));
            rev.clear();
            for (i64 n = 1; n <= N; ++n) {
                u64 idx = u64(pow_u128(u64(n), 3) & (M - 1));
                cplx v = std::polar(1.0, 0.001 * double(n));
                dense[idx] += v;
                u64 r = bit_reverse(idx, lg);
                sparse[r] += v;
                rev.push_back(r);
            }
            std::sort(rev.begin(), rev.end());
            rev.erase(std::unique(rev.begin(), rev.end()), rev.end());
        };
        fill();
        double td = timed([&] { fft_pow2(dense, +1); });
        double tsp = timed([&] { fft_pow2_prereversed(sparse, rev, +1); });
        bool same = true;
        for (u64 m = 0; m < M && same; ++m) same = dense[m] == sparse[m];
        report("fft 2^22: dense vs sparse-start", td, tsp, same);
    }

    {
        counterexample::LowerBoundCertificate a, b;
        double ts = timed([&] { a = counterexample::build_certificate(400, 3, 0.5, 1); });
        double tp = timed([&] { b = counterexample::build_certificate(400, 3, 0.5, threads); });
        report("build_certificate N=400", ts, tp,
               a.l1_lower == b.l1_lower && a.intervals.size() == b.intervals.size());
    }

    return 0;
}
