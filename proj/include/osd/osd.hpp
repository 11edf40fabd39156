#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "osd/gf2.hpp"

// Ordered-statistics decoding: sort received symbols by reliability, keep the
// most reliable independent generator columns as a basis, re-encode the hard
// decisions, then search test error patterns of bounded weight over the basis.

namespace osd {

struct OsdContext {
    std::size_t n = 0, k = 0;

    Permutation lambda1;  // reliability sort
    Permutation lambda2;  // independent-basis selection
    Permutation inv_total;  // maps permuted-domain words back to channel order

    std::vector<double> z;  // permuted observation; |z| sorted within [0,k) and [k,n)
    BitVector z_hard;       // hard decisions on the basis positions, length k
    BitMatrix g_sys;        // [I_K | P]
    BitVector a0;           // order-0 candidate in the permuted domain

    // scoring state for reprocessing
    std::vector<double> flip_penalty;  // 2|z_i| for basis positions
    std::vector<double> z_tail;        // z[k..n)
    std::size_t parity_words = 0;
    std::vector<std::uint64_t> parity_rows;  // k rows of P, packed
    std::vector<std::uint64_t> a0_parity;
    double base_msg_corr = 0.0;  // sum of |z_i| over basis
    double z_sq_sum = 0.0;
};

struct DecodeResult {
    BitVector codeword;  // original index order
    unsigned order_used = 0;
    std::uint64_t teps_evaluated = 0;
    double best_distance = 0.0;
};

// requires gf2_rank(g) == g.rows()
OsdContext build_context(std::span<const double> y, const BitMatrix& g);

// sign(0) counts as positive
inline int hard_decision(double z) { return z >= 0.0 ? 1 : 0; }

DecodeResult decode_order0(const OsdContext& ctx);

// best candidate over all test error patterns of weight <= order; ties go to
// the first pattern in enumeration order
DecodeResult decode(const OsdContext& ctx, unsigned order);

// one result per order 0..max_order from a single enumeration pass; entry l
// equals decode(ctx, l) exactly
std::vector<DecodeResult> decode_orders(const OsdContext& ctx,
                                        unsigned max_order);

// Test error patterns of weight <= max_weight over k positions, nondecreasing
// weight, and within a weight class the least reliable basis positions
// (k-1, k-2, ...) flip first.
class TepEnumerator {
public:
    TepEnumerator(std::size_t k, unsigned max_weight);

    // fills `out` (resized to length k) and returns true, or returns false
    // when the list is exhausted
    bool next(BitVector& out);

private:
    std::size_t k_;
    unsigned max_weight_;
    unsigned weight_ = 0;
    bool done_ = false;
    std::vector<std::size_t> ranks_;  // current combination, lexicographic
    bool advance();
};

// sum_{i<=order} C(k, i); throws std::overflow_error if it exceeds uint64
std::uint64_t tep_count(std::size_t k, unsigned order);

// min(ceil(d_min/4 - 1), k), floored at zero
unsigned asymptotic_order(unsigned d_min, std::size_t k);

}  // namespace osd
