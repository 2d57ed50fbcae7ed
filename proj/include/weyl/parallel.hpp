#pragma once

// Deterministic parallel building blocks.  Reductions are chunked with a
// fixed chunk count that does not depend on the thread count, and chunk
// partials are combined serially in index order, so results are
// bit-identical for any --threads setting.

#include <omp.h>

#include <cstdint>
#include <vector>

#include "weyl/common.hpp"

namespace weyl {

inline int resolve_threads(int requested) {
    return requested > 0 ? requested : omp_get_max_threads();
}

// f(i) for i in [0, n); each iteration writes only its own outputs.
template <class F>
void parallel_for(i64 n, int threads, F &&f) {
    threads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (i64 i = 0; i < n; ++i) f(i);
}

inline constexpr i64 REDUCE_CHUNKS = 256;

// sum_i g(i), chunked then combined in fixed order.
template <class G>
double deterministic_sum(i64 n, int threads, G &&g) {
    if (n <= 0) return 0.0;
    const i64 chunks = n < REDUCE_CHUNKS ? n : REDUCE_CHUNKS;
    std::vector<double> partial(chunks, 0.0);
    threads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (i64 c = 0; c < chunks; ++c) {
        i64 lo = n * c / chunks, hi = n * (c + 1) / chunks;
        double acc = 0.0;
        for (i64 i = lo; i < hi; ++i) acc += g(i);
        partial[c] = acc;
    }
    // pairwise tree, fixed order
    for (i64 width = 1; width < chunks; width <<= 1)
        for (i64 i = 0; i + width < chunks; i += 2 * width)
            partial[i] += partial[i + width];
    return partial[0];
}

}  // namespace weyl
