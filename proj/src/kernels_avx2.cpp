#include <algorithm>
#include <cmath>

#include "polling/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace polling::kernels {

#if defined(__AVX2__)

namespace {
double hmax(__m256d v) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, v);
    return std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
}
}  // namespace

void row_update_avx2(const RowArgs& a, std::size_t lo, std::size_t hi, RowDiff& diff) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d c1 = _mm256_set1_pd(a.c1);
    const __m256d scale = _mm256_set1_pd(a.scale);
    __m256d m0 = _mm256_set1_pd(diff.max_abs);
    __m256d m1 = _mm256_set1_pd(diff.max_weighted);
    std::size_t j = lo;
    for (; j + 4 <= hi; j += 4) {
        const __m256d s1 = _mm256_add_pd(_mm256_loadu_pd(a.prow + j), c1);
        __m256d s2 = _mm256_sub_pd(_mm256_loadu_pd(a.d + j), _mm256_loadu_pd(a.qrow + j));
        if (a.t) s2 = _mm256_add_pd(s2, _mm256_loadu_pd(a.t + j));
        const __m256d w = _mm256_mul_pd(scale, _mm256_loadu_pd(a.pi + j));
        const __m256d v =
            _mm256_add_pd(_mm256_mul_pd(w, _mm256_add_pd(s1, s2)), _mm256_loadu_pd(a.brow + j));
        const __m256d e = _mm256_andnot_pd(sign, _mm256_sub_pd(v, _mm256_loadu_pd(a.old + j)));
        _mm256_storeu_pd(a.out + j, v);
        m0 = _mm256_max_pd(m0, e);
        m1 = _mm256_max_pd(m1, _mm256_mul_pd(e, _mm256_loadu_pd(a.inv_pi + j)));
    }
    diff.max_abs = hmax(m0);
    diff.max_weighted = hmax(m1);
    if (j < hi) row_update_scalar(a, j, hi, diff);
}

bool avx2_compiled() { return true; }

#else

void row_update_avx2(const RowArgs& a, std::size_t lo, std::size_t hi, RowDiff& diff) {
    row_update_scalar(a, lo, hi, diff);
}

bool avx2_compiled() { return false; }

#endif

}  // namespace polling::kernels
