// Iterative radix-2 FFT, power-of-two lengths only (the grid evaluators
// reject anything else, so there is no Bluestein fallback here).
//
// Stage twiddles are the order-len roots of unity, cached per len and shared
// read-only between threads and transform sizes; each j/len is exact for
// power-of-two len, so table entries are correctly rounded sincos values.
// The prereversed entry point skips all-zero blocks in the early stages,
// which is the common case for grid sums with N nonzeros out of M slots.

#include "weyl/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace weyl {

bool is_pow2(u64 m) { return m != 0 && (m & (m - 1)) == 0; }

u64 next_pow2(u64 x) {
    u64 m = 1;
    while (m < x) m <<= 1;
    return m;
}

u64 bit_reverse(u64 i, int log2m) {
    u64 r = 0;
    for (int b = 0; b < log2m; ++b) {
        r = (r << 1) | (i & 1);
        i >>= 1;
    }
    return r;
}

namespace {

// roots[j] = exp(+2*pi*i*j/len) for j < len/2
std::shared_ptr<const std::vector<cplx>> unity_roots_half(u64 len) {
    static std::mutex mu;
    static std::map<u64, std::weak_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(len);
    if (it != cache.end())
        if (auto sp = it->second.lock()) return sp;
    auto tab = std::make_shared<std::vector<cplx>>(std::max<u64>(len / 2, 1));
    for (u64 j = 0; j < len / 2; ++j) {
        double ang = TWO_PI * (double(j) / double(len));
        (*tab)[j] = cplx(std::cos(ang), std::sin(ang));
    }
    cache[len] = tab;
    return tab;
}

template <int SIGN>
inline void butterfly_block(cplx *block, u64 half, const cplx *w) {
    double *d = reinterpret_cast<double *>(block);
    const double *tw = reinterpret_cast<const double *>(w);
    for (u64 j = 0; j < half; ++j) {
        double wr = tw[2 * j];
        double wi = SIGN > 0 ? tw[2 * j + 1] : -tw[2 * j + 1];
        double vr = d[2 * (j + half)], vi = d[2 * (j + half) + 1];
        double xr = vr * wr - vi * wi;
        double xi = vr * wi + vi * wr;
        double ur = d[2 * j], ui = d[2 * j + 1];
        d[2 * j] = ur + xr;
        d[2 * j + 1] = ui + xi;
        d[2 * (j + half)] = ur - xr;
        d[2 * (j + half) + 1] = ui - xi;
    }
}

// Two radix-2 stages fused into one memory pass over a block of 4h entries.
// Both stages use their table twiddles (w2[j] and w2[j+h]), so the float
// operations are exactly those of the separate stages and any mix of fused
// and unfused processing is bit-identical.
template <int SIGN>
inline void butterfly_block4(cplx *block, u64 h, const cplx *w1, const cplx *w2) {
    double *d = reinterpret_cast<double *>(block);
    const double *t1 = reinterpret_cast<const double *>(w1);
    const double *t2 = reinterpret_cast<const double *>(w2);
    for (u64 j = 0; j < h; ++j) {
        double w1r = t1[2 * j], w1i = SIGN > 0 ? t1[2 * j + 1] : -t1[2 * j + 1];
        double w2r = t2[2 * j], w2i = SIGN > 0 ? t2[2 * j + 1] : -t2[2 * j + 1];
        double wbr = t2[2 * (j + h)], wbi = SIGN > 0 ? t2[2 * (j + h) + 1] : -t2[2 * (j + h) + 1];
        double a0r = d[2 * j], a0i = d[2 * j + 1];
        double a1r = d[2 * (j + h)], a1i = d[2 * (j + h) + 1];
        double a2r = d[2 * (j + 2 * h)], a2i = d[2 * (j + 2 * h) + 1];
        double a3r = d[2 * (j + 3 * h)], a3i = d[2 * (j + 3 * h) + 1];
        // first stage on (0,1) and (2,3)
        double m1r = a1r * w1r - a1i * w1i, m1i = a1r * w1i + a1i * w1r;
        double m3r = a3r * w1r - a3i * w1i, m3i = a3r * w1i + a3i * w1r;
        double t0r = a0r + m1r, t0i = a0i + m1i;
        double u1r = a0r - m1r, u1i = a0i - m1i;
        double t2r = a2r + m3r, t2i = a2i + m3i;
        double t3r = a2r - m3r, t3i = a2i - m3i;
        // second stage on (0,2) with w2[j] and (1,3) with w2[j+h]
        double v2r = t2r * w2r - t2i * w2i, v2i = t2r * w2i + t2i * w2r;
        double v3r = t3r * wbr - t3i * wbi, v3i = t3r * wbi + t3i * wbr;
        d[2 * j] = t0r + v2r;
        d[2 * j + 1] = t0i + v2i;
        d[2 * (j + 2 * h)] = t0r - v2r;
        d[2 * (j + 2 * h) + 1] = t0i - v2i;
        d[2 * (j + h)] = u1r + v3r;
        d[2 * (j + h) + 1] = u1i + v3i;
        d[2 * (j + 3 * h)] = u1r - v3r;
        d[2 * (j + 3 * h) + 1] = u1i - v3i;
    }
}

void stages_from(std::span<cplx> data, int sign, std::vector<u64> live) {
    const u64 m = data.size();
    cplx *a = data.data();

    // one shared_ptr per stage keeps the tables alive without per-block locking
    std::vector<std::shared_ptr<const std::vector<cplx>>> tabs;
    for (u64 len = 2; len <= m; len <<= 1) tabs.push_back(unity_roots_half(len));

    int stage = 0;
    u64 len = 2;
    // sparse stages: only blocks that contain a nonzero input
    for (; len <= m && !live.empty() && live.size() * len < m; len <<= 1, ++stage) {
        const u64 half = len >> 1;
        const cplx *w = tabs[size_t(stage)]->data();
        for (u64 &s : live) s &= ~(len - 1);
        live.erase(std::unique(live.begin(), live.end()), live.end());
        for (u64 s : live) {
            if (sign > 0)
                butterfly_block<+1>(a + s, half, w);
            else
                butterfly_block<-1>(a + s, half, w);
        }
    }
    // dense stages, fused in pairs; a single radix-2 pass first when the
    // remaining stage count is odd
    int remaining = 0;
    for (u64 l = len; l <= m; l <<= 1) ++remaining;
    if (remaining % 2 == 1) {
        const u64 half = len >> 1;
        const cplx *w = tabs[size_t(stage)]->data();
        if (sign > 0)
            for (u64 base = 0; base < m; base += len) butterfly_block<+1>(a + base, half, w);
        else
            for (u64 base = 0; base < m; base += len) butterfly_block<-1>(a + base, half, w);
        len <<= 1;
        ++stage;
    }
    for (; len <= m; len <<= 2, stage += 2) {
        const u64 h = len >> 1;
        const cplx *w1 = tabs[size_t(stage)]->data();
        const cplx *w2 = tabs[size_t(stage) + 1]->data();
        if (sign > 0)
            for (u64 base = 0; base < m; base += 4 * h) butterfly_block4<+1>(a + base, h, w1, w2);
        else
            for (u64 base = 0; base < m; base += 4 * h) butterfly_block4<-1>(a + base, h, w1, w2);
    }
}

}  // namespace

void fft_pow2_prereversed(std::span<cplx> data, std::span<const u64> nonzero_rev, int sign) {
    if (!is_pow2(data.size())) throw InvalidInput("FFT length must be a power of two");
    if (data.size() == 1) return;
    std::vector<u64> live(nonzero_rev.begin(), nonzero_rev.end());
    stages_from(data, sign, std::move(live));
}

void fft_pow2(std::span<cplx> data, int sign) {
    const u64 m = data.size();
    if (!is_pow2(m)) throw InvalidInput("FFT length must be a power of two");
    if (m == 1) return;
    int lg = 0;
    while ((u64(1) << lg) < m) ++lg;
    for (u64 i = 0; i < m; ++i) {
        u64 r = bit_reverse(i, lg);
        if (r > i) std::swap(data[i], data[r]);
    }
    stages_from(data, sign, {});
}

std::vector<cplx> dft_direct(std::span<const cplx> in, int sign) {
    const u64 m = in.size();
    std::vector<cplx> out(m);
    for (u64 k = 0; k < m; ++k) {
        cplx acc = 0;
        for (u64 r = 0; r < m; ++r) {
            double ang = sign * TWO_PI * double((r * k) % m) / double(m);
            acc += in[r] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace weyl
