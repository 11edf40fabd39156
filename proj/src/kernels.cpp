#include "osd/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace osd::kern {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double signed_sum_scalar(const std::uint64_t* mask, const double* v,
                         std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool bit = (mask[i >> 6] >> (i & 63)) & 1u;
        acc += bit ? v[i] : -v[i];
    }
    return acc;
}

void xor_words_scalar(std::uint64_t* dst, const std::uint64_t* src,
                      std::size_t nwords) {
    for (std::size_t i = 0; i < nwords; ++i) dst[i] ^= src[i];
}

const Ops kScalar{"scalar", dot_scalar, axpy_scalar, signed_sum_scalar,
                  xor_words_scalar};

const Ops& resolve() {
    const char* env = std::getenv("OSD_KERNELS");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return kScalar;
    if (want == "avx2") {
        if (have_avx2()) return avx2_ops();
        return kScalar;
    }
    return have_avx2() ? avx2_ops() : kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& active() {
    static const Ops& ops = resolve();
    return ops;
}

#ifndef OSD_HAVE_AVX2
bool have_avx2() { return false; }
const Ops& avx2_ops() { return kScalar; }
#endif

}  // namespace osd::kern
