#pragma once

#include <cmath>
#include <cstddef>

// Batched exp/log over arrays for the analysis passes (censuses, coupling
// checks, streamed estimators). On x86-64 Linux these call the glibc vector
// kernels directly by symbol, which keeps the speedup confined to these
// helpers: nothing here redeclares the scalar math functions, so including
// this header cannot change how other code is compiled.
//
// Path constructors deliberately do not use these: vector exp differs from
// scalar exp in the last ulp and varies by lane width, while paths must be
// bit-reproducible across hosts.

#if defined(__x86_64__) && defined(__linux__) && defined(__GLIBC__) && \
    !defined(STABLELIKE_NO_LIBMVEC)
#define STABLELIKE_LIBMVEC 1
#include <immintrin.h>
#if defined(__AVX2__)
extern "C" __m256d _ZGVdN4v_exp(__m256d);
extern "C" __m256d _ZGVdN4v_log(__m256d);
#else
extern "C" __m128d _ZGVbN2v_exp(__m128d);
extern "C" __m128d _ZGVbN2v_log(__m128d);
#endif
#endif

namespace stablelike::detail {

inline void vexp(const double* in, double* out, std::size_t n) {
    std::size_t i = 0;
#if defined(STABLELIKE_LIBMVEC) && defined(__AVX2__)
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _ZGVdN4v_exp(_mm256_loadu_pd(in + i)));
#elif defined(STABLELIKE_LIBMVEC)
    for (; i + 2 <= n; i += 2)
        _mm_storeu_pd(out + i, _ZGVbN2v_exp(_mm_loadu_pd(in + i)));
#endif
    for (; i < n; ++i) out[i] = std::exp(in[i]);
}

inline void vlog(const double* in, double* out, std::size_t n) {
    std::size_t i = 0;
#if defined(STABLELIKE_LIBMVEC) && defined(__AVX2__)
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _ZGVdN4v_log(_mm256_loadu_pd(in + i)));
#elif defined(STABLELIKE_LIBMVEC)
    for (; i + 2 <= n; i += 2)
        _mm_storeu_pd(out + i, _ZGVbN2v_log(_mm_loadu_pd(in + i)));
#endif
    for (; i < n; ++i) out[i] = std::log(in[i]);
}

// out[i] = exp(in[i] * c); the workhorse for "raise all jumps to 1/alpha".
inline void vexp_scaled(const double* in, double c, double* out, std::size_t n) {
    std::size_t i = 0;
#if defined(STABLELIKE_LIBMVEC) && defined(__AVX2__)
    const __m256d vc = _mm256_set1_pd(c);
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i,
                         _ZGVdN4v_exp(_mm256_mul_pd(_mm256_loadu_pd(in + i), vc)));
#elif defined(STABLELIKE_LIBMVEC)
    const __m128d vc = _mm_set1_pd(c);
    for (; i + 2 <= n; i += 2)
        _mm_storeu_pd(out + i, _ZGVbN2v_exp(_mm_mul_pd(_mm_loadu_pd(in + i), vc)));
#endif
    for (; i < n; ++i) out[i] = std::exp(in[i] * c);
}

}  // namespace stablelike::detail
