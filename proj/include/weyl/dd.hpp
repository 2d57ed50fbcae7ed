#pragma once

// Compensated (double-double) helpers for exact phase reduction.
//
// The quantity we need everywhere is frac(P * t) for an exact integer P
// (think n^k, with n^k <= 2^100) and a double t.  Plain double loses the
// fractional part entirely once P*t > 2^53, which happens already for
// k = 4 at modest N.  The trick:
//
//   r_j = frac(2^(32 j) * t)  is an *exact* double for every j:
//   scaling by a power of two is exact and frac() of a double is exact.
//   Splitting P into 32-bit limbs c_j,
//
//     frac(P * t) = frac( sum_j c_j * r_j ),
//
//   and each product c_j * r_j is exactly representable as a double-double
//   (two_prod).  The only rounding left is a handful of double-double
//   additions, so the result carries ~1e-21 absolute error, far below the
//   2pi * 1e-10 per-term phase budget.

#include <cmath>
#include <cstdint>

#include "weyl/common.hpp"

namespace weyl {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

// frac of a nonnegative double-double, result in [0,1)
inline DD dd_frac(DD a) {
    double f = std::floor(a.hi);
    DD r = quick_two_sum(a.hi - f, a.lo);  // a.hi - f is exact
    if (r.hi < 0.0) r = dd_add(r, {1.0, 0.0});
    if (r.hi >= 1.0) r = dd_add(r, {-1.0, 0.0});
    return r;
}

// n^k as an exact 128-bit integer; throws once past the 2^100 guard.
inline u128 checked_pow_u128(u64 n, int k) {
    const u128 guard = u128(1) << 100;
    u128 acc = 1;
    for (int i = 0; i < k; ++i) {
        if (n != 0 && acc > guard / n)
            throw PrecisionError("n^k exceeds the 2^100 exact-phase guard (n=" +
                                 std::to_string(n) + ", k=" + std::to_string(k) + ")");
        acc *= n;
    }
    if (acc > guard)
        throw PrecisionError("n^k exceeds the 2^100 exact-phase guard");
    return acc;
}

// n^k without the guard; callers must have validated n^k <= 2^100 already.
inline u128 pow_u128(u64 n, int k) {
    u128 acc = 1;
    while (k-- > 0) acc *= n;
    return acc;
}

// frac(P * t) for exact integer P < 2^128, |t| arbitrary double; in [0,1).
inline double frac_int_times_real(u128 p, double t) {
    // exact fractional parts of 2^(32 j) * t
    double r0 = t - std::floor(t);
    double r[4];
    r[0] = r0;
    for (int j = 1; j < 4; ++j) {
        double s = r[j - 1] * 4294967296.0;  // exact scaling
        r[j] = s - std::floor(s);            // exact frac
    }
    DD acc{0.0, 0.0};
    for (int j = 0; j < 4 && p != 0; ++j, p >>= 32) {
        double c = double(u64(p & 0xffffffffu));
        if (c != 0.0) acc = dd_frac(dd_add(acc, two_prod(c, r[j])));
    }
    double out = acc.hi + acc.lo;
    if (out < 0.0) out += 1.0;
    if (out >= 1.0) out -= 1.0;
    return out;
}

// frac(n * t) convenience for plain 64-bit n.
inline double frac_int_times_real(u64 n, double t) {
    return frac_int_times_real(u128(n), t);
}

}  // namespace weyl
