// AVX2 variants of the distance kernels. Compiled with -mavx2 in its own
// translation unit; only reached through the runtime dispatch when the CPU
// reports AVX2 support.
//
// The vector code mirrors the scalar reference operation-for-operation:
// per-node accumulation uses separate multiply and add (no FMA), and the
// final reduction is a plain max, so results are bit-identical to the
// scalar backend. The equivalence tests rely on that.

#include "evlab/kernels.hpp"

#if defined(EVLAB_HAVE_AVX2_TU)

#include <immintrin.h>

namespace evlab::kernels::avx2 {

namespace {

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

}  // namespace

double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b) {
    __m256d vbest = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= nodes; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const double* pa = a + j * stride_a + k;
            const double* pb = b + j * stride_b + k;
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa), _mm256_loadu_pd(pb));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
        vbest = _mm256_max_pd(vbest, acc);
    }
    double best = hmax(vbest);
    for (; k < nodes; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = a[j * stride_a + k] - b[j * stride_b + k];
            s += d * d;
        }
        if (s > best) best = s;
    }
    return best;
}

double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff) {
    __m256d vbest = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= nodes; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const double* pa = a + j * stride_a + k;
            const double* pb = b + j * stride_b + k;
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa), _mm256_loadu_pd(pb));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
        vbest = _mm256_max_pd(vbest, acc);
        const double block_best = hmax(vbest);
        if (block_best >= cutoff) return block_best;
    }
    double best = hmax(vbest);
    for (; k < nodes; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = a[j * stride_a + k] - b[j * stride_b + k];
            s += d * d;
        }
        if (s > best) {
            best = s;
            if (best >= cutoff) return best;
        }
    }
    return best;
}

}  // namespace evlab::kernels::avx2

#endif  // EVLAB_HAVE_AVX2_TU
