#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the decoder hot path and the network
// trainer. The scalar versions are the reference implementations; SIMD
// variants are selected at runtime and must agree with them (bit-exactly for
// integer ops, up to summation-order rounding for float reductions).

namespace osd::kern {

struct Ops {
    const char* name;

    // sum a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    // sum v[i] * (+1 if bit i of mask set, else -1); mask packed LSB-first
    // in 64-bit words. Correlation of a real vector against antipodal bits.
    double (*signed_sum)(const std::uint64_t* mask, const double* v,
                         std::size_t n);

    // dst[i] ^= src[i] over nwords 64-bit words
    void (*xor_words)(std::uint64_t* dst, const std::uint64_t* src,
                      std::size_t nwords);
};

const Ops& scalar_ops();

// True when AVX2+FMA kernels are both compiled in and supported by this CPU.
bool have_avx2();
const Ops& avx2_ops();

// Runtime-selected table. Honors OSD_KERNELS=scalar|avx2|auto (default auto:
// best available). Resolved once, then cached.
const Ops& active();

}  // namespace osd::kern
