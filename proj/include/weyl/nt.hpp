#pragma once

#include <span>
#include <utility>
#include <vector>

#include "weyl/common.hpp"

namespace weyl::nt {

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 mod);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(u64 n);

// Reduced fraction; den > 0, gcd(|num|, den) = 1.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    static Rational reduced(i64 num, i64 den);
    bool operator==(const Rational &) const = default;
    double value() const { return double(num) / double(den); }
};

struct Factorization {
    // (prime, exponent), primes strictly increasing
    std::vector<std::pair<u64, int>> factors;

    u64 value() const;
};

// Trial division below 10^6, then Brent-Pollard rho with Miller-Rabin
// certification.  Valid for 1 <= m <= 2^63.
Factorization factorize(u64 m);

// (is_free, is_full) per the r-th power classification; m = 1 is both.
std::pair<bool, bool> classify_power(u64 m, int r);
std::pair<bool, bool> classify_power(const Factorization &f, int r);

// All i-th power full integers in [1, x], ascending (1 included).
std::vector<u64> enumerate_power_full(int i, u64 x);

// q = q_2 * ... * q_k, pairwise coprime, with q_2 cube free, q_i exactly
// i-th power full / (i+1)-th power free for 3 <= i <= k-1, q_k k-th power
// full.  parts[0] = q_2, ..., parts[k-2] = q_k.
struct ModulusDecomposition {
    int k = 3;
    std::vector<u64> parts;

    u64 part(int i) const { return parts[size_t(i) - 2]; }  // i in [2, k]
    u64 product() const;
};

ModulusDecomposition decompose_modulus(u64 q, int k);

// |S_k(b/q; q)| / prod_j q_j^(1 - 1/j); requires gcd(q, b_1..b_k) = 1.
double gauss_bound_ratio(int k, u64 q, std::span<const i64> b);

// Best rational approximation via continued-fraction convergents: the last
// convergent with den <= M, which satisfies |alpha - a/q| <= 1/(qM).
Rational dirichlet_approx(double alpha, double M);

// All primes in [lo, hi], ascending; segmented sieve, hi <= 2^40.
std::vector<u64> primes_in(u64 lo, u64 hi, int threads = 0);

}  // namespace weyl::nt
