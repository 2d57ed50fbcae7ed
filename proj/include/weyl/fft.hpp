#pragma once

#include <span>
#include <vector>

#include "weyl/common.hpp"

namespace weyl {

bool is_pow2(u64 m);
u64 next_pow2(u64 x);

// Index with bit-reversed binary digits, for log2(m)-bit words.
u64 bit_reverse(u64 i, int log2m);

// In-place power-of-two transform
//   data[m] <- sum_r data[r] * exp(sign * 2*pi*i * r*m / M).
// sign = +1 matches the e(x) = exp(+2*pi*i*x) convention used throughout.
void fft_pow2(std::span<cplx> data, int sign);

// Same transform, but `data` is already in bit-reversed order and only the
// listed (bit-reversed) positions are nonzero.  Early stages then skip
// all-zero blocks, which is the common case for grid sums where N << M.
// `nonzero_rev` must be sorted ascending.
void fft_pow2_prereversed(std::span<cplx> data, std::span<const u64> nonzero_rev, int sign);

// O(M^2) reference transform, kept for testing the fast paths.
std::vector<cplx> dft_direct(std::span<const cplx> in, int sign);

}  // namespace weyl
