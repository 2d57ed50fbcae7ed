#include "weyl/nt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weyl/parallel.hpp"
#include "weyl/sums.hpp"

namespace weyl::nt {

u64 powmod(u64 base, u64 exp, u64 mod) {
    if (mod == 1) return 0;
    u64 r = 1;
    base %= mod;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, mod);
        base = mulmod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    // deterministic witness set below 2^64
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

Rational Rational::reduced(i64 num, i64 den) {
    if (den == 0) throw InvalidInput("Rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    i64 g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    return {num, den};
}

u64 Factorization::value() const {
    u64 v = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) v *= p;
    return v;
}

namespace {

u64 pollard_brent(u64 n) {
    // n odd composite with no factor below 10^6
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 x = 2, y = 2, d = 1, q = 1;
        u64 lam = 1;
        while (d == 1) {
            x = y;
            for (u64 i = 0; i < lam; ++i) y = f(y);
            for (u64 i = 0; i < lam && d == 1; i += 128) {
                u64 ys = y;
                u64 lim = std::min<u64>(lam - i, 128);
                for (u64 j = 0; j < lim; ++j) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                if (d == n) {
                    d = 1;
                    y = ys;
                    do {
                        y = f(y);
                        d = std::gcd(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

void factor_rec(u64 n, std::vector<u64> &out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

Factorization factorize(u64 m) {
    if (m < 1 || m > (u64(1) << 63))
        throw InvalidInput("factorize: m must be in [1, 2^63]");
    std::vector<u64> primes;
    for (u64 p = 2; p < 1000000 && p * p <= m; p += (p == 2 ? 1 : 2))
        while (m % p == 0) { primes.push_back(p); m /= p; }
    if (m > 1) {
        if (m < u64(1000000) * 1000000)
            primes.push_back(m);  // no factor below 10^6 and m < 10^12
        else
            factor_rec(m, primes);
    }
    std::sort(primes.begin(), primes.end());
    Factorization f;
    for (size_t i = 0; i < primes.size();) {
        size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.emplace_back(primes[i], int(j - i));
        i = j;
    }
    return f;
}

std::pair<bool, bool> classify_power(const Factorization &f, int r) {
    if (r < 2) throw InvalidInput("classify_power: r must be >= 2");
    bool is_free = true, is_full = true;
    for (auto [p, e] : f.factors) {
        (void)p;
        if (e >= r) is_free = false;
        if (e < r) is_full = false;
    }
    return {is_free, is_full};  // m = 1: both
}

std::pair<bool, bool> classify_power(u64 m, int r) {
    return classify_power(factorize(m), r);
}

std::vector<u64> enumerate_power_full(int i, u64 x) {
    if (i < 2) throw InvalidInput("enumerate_power_full: i must be >= 2");
    if (x < 1) throw InvalidInput("enumerate_power_full: x must be >= 1");
    u64 pmax = u64(std::pow(double(x), 1.0 / i)) + 2;
    std::vector<u64> primes = primes_in(2, std::max<u64>(pmax, 2), 1);
    std::vector<u64> out{1};
    // each prime enters with exponent 0 or >= i; exact u128 pruning
    auto rec = [&](auto &&self, size_t idx, u64 cur) -> void {
        for (size_t t = idx; t < primes.size(); ++t) {
            u128 v = cur;
            for (int e = 0; e < i; ++e) {
                v *= primes[t];
                if (v > x) return;  // primes ascending, so all later t overflow too
            }
            while (v <= x) {
                out.push_back(u64(v));
                self(self, t + 1, u64(v));
                v *= primes[t];
            }
        }
    };
    rec(rec, 0, 1);
    std::sort(out.begin(), out.end());
    return out;
}

u64 ModulusDecomposition::product() const {
    u64 v = 1;
    for (u64 p : parts) v *= p;
    return v;
}

ModulusDecomposition decompose_modulus(u64 q, int k) {
    if (k < 3) throw InvalidInput("decompose_modulus: k must be >= 3");
    if (q < 1) throw InvalidInput("decompose_modulus: q must be >= 1");
    ModulusDecomposition d;
    d.k = k;
    d.parts.assign(size_t(k) - 1, 1);
    // route each prime power by its exponent: e <= 2 -> q_2, e = i -> q_i, e >= k -> q_k
    for (auto [p, e] : factorize(q).factors) {
        int slot = e <= 2 ? 2 : (e >= k ? k : e);
        u64 pe = 1;
        for (int t = 0; t < e; ++t) pe *= p;
        d.parts[size_t(slot) - 2] *= pe;
    }
    return d;
}

double gauss_bound_ratio(int k, u64 q, std::span<const i64> b) {
    if (int(b.size()) != k) throw InvalidInput("gauss_bound_ratio: need k coefficients");
    if (q < 1) throw InvalidInput("gauss_bound_ratio: q must be >= 1");
    u64 g = q;
    for (i64 c : b) {
        i64 r = c % i64(q);
        if (r < 0) r += i64(q);
        g = std::gcd(g, u64(r));
    }
    if (g != 1) throw InvalidInput("gauss_bound_ratio: gcd(q, b_1..b_k) must be 1");
    cplx s = sums::eval_complete_sum(q, b);
    ModulusDecomposition d = decompose_modulus(q, k);
    double denom = 1.0;
    for (int j = 2; j <= k; ++j) denom *= std::pow(double(d.part(j)), 1.0 - 1.0 / j);
    return std::abs(s) / denom;
}

Rational dirichlet_approx(double alpha, double M) {
    if (!(M >= 1.0)) throw InvalidInput("dirichlet_approx: M must be >= 1");
    if (M > 9.0e18) throw InvalidInput("dirichlet_approx: M too large");
    if (!std::isfinite(alpha) || std::abs(alpha) > 4.5e15)
        throw InvalidInput("dirichlet_approx: alpha out of supported range");
    const bool neg = alpha < 0;
    alpha = std::abs(alpha);
    if (alpha == 0.0) return Rational{0, 1};
    const i128 qcap = i128(u64(M));

    // alpha is the dyadic rational num * 2^E, exactly
    int e2;
    double mant = std::frexp(alpha, &e2);
    i128 num = i128(std::ldexp(mant, 53));  // exact integer < 2^53
    int E = e2 - 53;
    i128 den = 1;
    if (E >= 0) {
        num <<= E;  // |alpha| <= 4.5e15 keeps this within 2^53
    } else if (-E <= 125) {
        den <<= -E;
    } else {
        // alpha < 2^-72, so alpha * M < 2^-9 and 0/1 already meets the bound
        return Rational{0, 1};
    }

    // continued-fraction convergents h/k of num/den; keep the last with k <= M.
    // The first partial quotient always yields k = 1 <= M, so the loop returns
    // a genuine convergent.  Once the next k would pass M we stop, which gives
    // |alpha - h/k| <= 1/(k * k_next) < 1/(kM).
    i128 h_prev = 0, k_prev = 1;  // h_{-2}, k_{-2}
    i128 h = 1, k = 0;            // h_{-1}, k_{-1}
    i128 a = num, b = den;
    while (b != 0) {
        i128 t = a / b;
        if (k != 0 && t > (qcap - k_prev) / k) break;  // k_next would exceed M
        i128 h_next = t * h + h_prev;
        i128 k_next = t * k + k_prev;
        h_prev = h; k_prev = k; h = h_next; k = k_next;
        i128 r = a - t * b;
        a = b; b = r;
    }
    if (h > (i128(1) << 62)) throw InvalidInput("dirichlet_approx: numerator overflows i64");
    return Rational::reduced(neg ? -i64(h) : i64(h), i64(k));
}

std::vector<u64> primes_in(u64 lo, u64 hi, int threads) {
    if (lo > hi) return {};
    if (hi > (u64(1) << 40)) throw InvalidInput("primes_in: hi must be <= 2^40");
    if (lo < 2) lo = 2;
    u64 root = u64(std::sqrt(double(hi))) + 2;
    while (root > 2 && (root - 1) * (root - 1) > hi) --root;
    std::vector<bool> base(root + 1, true);
    std::vector<u64> base_primes;
    for (u64 p = 2; p <= root; ++p) {
        if (!base[p]) continue;
        base_primes.push_back(p);
        for (u64 q = p * p; q <= root; q += p) base[q] = false;
    }
    const u64 seg_size = 1 << 18;
    const u64 nseg = (hi - lo) / seg_size + 1;
    std::vector<std::vector<u64>> per_seg(nseg);
    parallel_for(i64(nseg), threads, [&](i64 s) {
        u64 a = lo + u64(s) * seg_size;
        u64 b = std::min(hi, a + seg_size - 1);
        std::vector<bool> mark(b - a + 1, true);
        for (u64 p : base_primes) {
            if (p * p > b) break;
            u64 start = std::max(p * p, (a + p - 1) / p * p);
            for (u64 m = start; m <= b; m += p) mark[m - a] = false;
        }
        for (u64 v = a; v <= b; ++v)
            if (mark[v - a]) per_seg[s].push_back(v);
    });
    std::vector<u64> out;
    for (auto &v : per_seg) out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace weyl::nt
