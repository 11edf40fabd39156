// AVX2/FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma in
// its own translation unit; callers go through kern::active(), which checks
// CPU support before handing out this table.

#include "osd/kernels.hpp"

#include <immintrin.h>

namespace osd::kern {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

// sign mask per 4-bit nibble: lane gets 0 (keep) when the bit is set,
// sign bit (negate) when clear
alignas(32) constexpr std::uint64_t kNibbleSign[16][4] = {
#define ROW(n)                                             \
    {                                                      \
        ((n) & 1) ? 0u : 0x8000000000000000ull,            \
            ((n) & 2) ? 0u : 0x8000000000000000ull,        \
            ((n) & 4) ? 0u : 0x8000000000000000ull,        \
            ((n) & 8) ? 0u : 0x8000000000000000ull         \
    }
    ROW(0),  ROW(1),  ROW(2),  ROW(3),  ROW(4),  ROW(5),  ROW(6),  ROW(7),
    ROW(8),  ROW(9),  ROW(10), ROW(11), ROW(12), ROW(13), ROW(14), ROW(15),
#undef ROW
};

double signed_sum_avx2(const std::uint64_t* mask, const double* v,
                       std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const unsigned nib = (mask[i >> 6] >> (i & 63)) & 0xFu;
        const __m256d sign = _mm256_load_pd(
            reinterpret_cast<const double*>(kNibbleSign[nib]));
        acc = _mm256_add_pd(acc, _mm256_xor_pd(_mm256_loadu_pd(v + i), sign));
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const bool bit = (mask[i >> 6] >> (i & 63)) & 1u;
        out += bit ? v[i] : -v[i];
    }
    return out;
}

void xor_words_avx2(std::uint64_t* dst, const std::uint64_t* src,
                    std::size_t nwords) {
    std::size_t i = 0;
    for (; i + 4 <= nwords; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<__m256i*>(dst + i));
        __m256i s =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                            _mm256_xor_si256(d, s));
    }
    for (; i < nwords; ++i) dst[i] ^= src[i];
}

const Ops kAvx2{"avx2", dot_avx2, axpy_avx2, signed_sum_avx2, xor_words_avx2};

}  // namespace

bool have_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& avx2_ops() { return kAvx2; }

}  // namespace osd::kern
