#pragma once

#include <utility>
#include <vector>

#include "weyl/common.hpp"

namespace weyl::counterexample {

// Census of |S_k(b, a, q)| >= (1/2) sqrt(q) over all (b, a) in [1,q]^2,
// where b sits in the n^k slot and a in the n slot.
struct GoodSetCensus {
    int k = 3;
    u64 q = 5;
    double alpha1 = 0.5;            // threshold multiplier on sqrt(q)
    std::vector<i64> counts_per_b;  // index b-1, b in [1, q]
    i64 total = 0;
    i64 best_b = 1;                 // smallest maximizer
};

// Requires q >= 3 prime with q not dividing k.
GoodSetCensus good_set_census(int k, u64 q, int threads = 0);

struct CertInterval {
    u64 q = 0;
    i64 a = 0;            // x-side numerator, 1 <= a < q
    i64 b = 0;            // t-side numerator (fixed per q)
    double center = 0.0;  // a/q
    double radius = 0.0;  // 1/(100N)
    double height = 0.0;  // measured inf over J(q,a) of the t-window sup
};

struct LowerBoundCertificate {
    i64 N = 0;
    int k = 3;
    double c1 = 0.5;
    std::vector<u64> primes;                    // admissible primes in [c1 sqrt N, sqrt N]
    std::vector<std::pair<u64, i64>> chosen_b;  // (q, b(q))
    std::vector<CertInterval> intervals;
    double l1_lower = 0.0;
    double target = 0.0;  // N^(3/4)
};

LowerBoundCertificate build_certificate(i64 N, int k, double c1 = 0.5, int threads = 0);

struct CertVerification {
    double theta = 0.0;  // min over sampled rectangle points of |omega| sqrt(q) / N
    double l1_recomputed = 0.0;
    double rel_diff = 0.0;
    double ratio = 0.0;  // l1_recomputed / N^(3/4)
    i64 points_sampled = 0;
};

// Re-evaluates the Weyl sum directly at the center and 8 seeded-random points
// of every rectangle, and recomputes l1_lower from scratch.
CertVerification verify_certificate(const LowerBoundCertificate &cert, u64 seed = 12345,
                                    int threads = 0);

// Constructive-interference box: returns 0.99 N (10^-6 / N)^(1/p) after
// checking the 16x16 grid inf really clears 0.99 N.
double trivial_lower_bound(i64 N, int k, double p);

// Deterministic inf-of-windowed-sup measurement for one interval; shared by
// the builder and the verifier.
double interval_height(i64 N, int k, u64 q, i64 a, i64 b);

}  // namespace weyl::counterexample
