#pragma once

#include <span>
#include <vector>

#include "osd/gf2.hpp"

// Brute-force maximum-likelihood decoding for small codes; the ground truth
// the OSD tests compare against.

namespace osd {

class CodebookTable {
public:
    // enumerates all 2^k codewords; refuses k > 20
    explicit CodebookTable(const BitMatrix& g);

    std::size_t size() const { return codewords_.size(); }
    std::size_t block_length() const { return n_; }
    const BitVector& codeword(std::size_t idx) const { return codewords_[idx]; }
    std::span<const double> antipodal(std::size_t idx) const {
        return {antipodal_.data() + idx * n_, n_};
    }

private:
    std::size_t n_;
    std::vector<BitVector> codewords_;
    std::vector<double> antipodal_;
};

// argmax <y, x> over the codebook; ties resolve to the lowest codeword index
BitVector ml_decode(std::span<const double> y, const CodebookTable& codebook);

}  // namespace osd
