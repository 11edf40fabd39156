#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osd/gf2.hpp"

namespace osd {

struct CodeSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    unsigned d_min = 1;  // declared metadata, not recomputed
    std::string name;
};

struct Code {
    CodeSpec spec;
    BitMatrix generator;  // k x n

    double rate() const {
        return static_cast<double>(spec.k) / static_cast<double>(spec.n);
    }
};

// GF(2^m) with a fixed primitive polynomial. Construction verifies the
// polynomial is primitive by checking that powers of alpha enumerate the
// whole multiplicative group.
class Gf2mField {
public:
    Gf2mField(unsigned m, std::uint32_t primitive_poly);

    unsigned degree() const { return m_; }
    std::size_t group_order() const { return order_; }  // 2^m - 1

    std::uint32_t alpha_pow(std::size_t e) const {
        return alpha_to_[e % order_];
    }
    std::size_t log(std::uint32_t x) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;

private:
    unsigned m_;
    std::size_t order_;
    std::vector<std::uint32_t> alpha_to_;
    std::vector<std::size_t> index_of_;
};

// Product of the minimal polynomials of alpha^first_root..alpha^last_root,
// i.e. prod (x + alpha^r) over the union of their cyclotomic cosets.
// Coefficients end up in GF(2); returned lowest degree first.
BitVector bch_generator_polynomial(const Gf2mField& field, unsigned first_root,
                                   unsigned last_root);

// BCH(127,64) from roots alpha^1..alpha^20 over GF(2^7) with primitive
// polynomial x^7 + x^3 + 1, cyclic generator matrix, plus an overall
// even-parity column. Gives the (128,64,22) extended code.
Code build_ebch_128_64();

// Hamming(7,4,3) in systematic form, or its (8,4,4) even-parity extension.
Code build_hamming(bool extended);

// Text format: "N K" on line 1, then K lines of N characters from {0,1}.
Code load_generator(const std::string& path);
void save_generator(const std::string& path, const BitMatrix& g);

// "ebch128", "hamming74", "ehamming84", or a generator file path.
Code resolve_code(const std::string& name_or_path);

}  // namespace osd
