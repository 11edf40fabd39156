#include "osd/ml_oracle.hpp"

#include <stdexcept>

#include "osd/kernels.hpp"

namespace osd {

CodebookTable::CodebookTable(const BitMatrix& g) : n_(g.cols()) {
    const std::size_t k = g.rows();
    if (k > 20)
        throw std::invalid_argument("CodebookTable: k > 20 is out of reach");

    const std::size_t count = std::size_t(1) << k;
    codewords_.reserve(count);
    antipodal_.resize(count * n_);
    BitVector msg(k);
    for (std::size_t u = 0; u < count; ++u) {
        for (std::size_t i = 0; i < k; ++i) msg.set(i, (u >> i) & 1u);
        BitVector cw = mat_vec_mul(g, msg);
        double* x = antipodal_.data() + u * n_;
        for (std::size_t i = 0; i < n_; ++i) x[i] = cw.get(i) ? 1.0 : -1.0;
        codewords_.push_back(std::move(cw));
    }
}

BitVector ml_decode(std::span<const double> y, const CodebookTable& codebook) {
    if (y.size() != codebook.block_length())
        throw std::invalid_argument("ml_decode: length mismatch");
    const auto& ops = kern::active();
    std::size_t best = 0;
    double best_corr = -1e300;
    for (std::size_t u = 0; u < codebook.size(); ++u) {
        const auto x = codebook.antipodal(u);
        const double corr = ops.dot(y.data(), x.data(), y.size());
        if (corr > best_corr) {
            best_corr = corr;
            best = u;
        }
    }
    return codebook.codeword(best);
}

}  // namespace osd
