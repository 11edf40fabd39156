#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Bit-packed GF(2) vectors and matrices. Row updates are word-wide XORs so
// that elimination and reprocessing stay cheap.

namespace osd {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t length)
        : len_(length), w_((length + 63) / 64, 0) {}

    static BitVector from_string(std::string_view bits);

    std::size_t size() const { return len_; }
    std::size_t word_count() const { return w_.size(); }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t bit = std::uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= bit;
        else
            w_[i >> 6] &= ~bit;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    BitVector& operator^=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }

    std::size_t popcount() const;
    bool any() const;

    std::span<const std::uint64_t> words() const { return w_; }
    std::span<std::uint64_t> words() { return w_; }

    std::string to_string() const;

    bool operator==(const BitVector&) const = default;

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), r_(rows, BitVector(cols)) {}

    static BitMatrix identity(std::size_t k);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BitVector& row(std::size_t r) { return r_[r]; }
    const BitVector& row(std::size_t r) const { return r_[r]; }

    bool get(std::size_t r, std::size_t c) const { return r_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v) { r_[r].set(c, v); }

    BitVector column(std::size_t c) const;
    void swap_columns(std::size_t a, std::size_t b);

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVector> r_;
};

// Gather-style index map: apply(v)[i] = v[map[i]].
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::size_t n);  // identity
    static Permutation from_indices(std::vector<std::uint32_t> map);

    std::size_t size() const { return map_.size(); }
    std::uint32_t operator[](std::size_t i) const { return map_[i]; }
    bool is_identity() const;

    Permutation inverse() const;
    // composition: first this, then next. (this.then(next)).apply(v) ==
    // next.apply(this.apply(v))
    Permutation then(const Permutation& next) const;

    template <typename T>
    std::vector<T> apply(std::span<const T> v) const {
        std::vector<T> out(map_.size());
        for (std::size_t i = 0; i < map_.size(); ++i) out[i] = v[map_[i]];
        return out;
    }
    template <typename T>
    std::vector<T> apply(const std::vector<T>& v) const {
        return apply(std::span<const T>(v));
    }
    BitVector apply(const BitVector& v) const;
    // column i of result = column map[i] of m
    BitMatrix apply_columns(const BitMatrix& m) const;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::uint32_t> map_;
};

// result[j] = XOR_i v[i] & m[i][j]; requires v.size() == m.rows()
BitVector mat_vec_mul(const BitMatrix& m, const BitVector& v);

std::size_t gf2_rank(const BitMatrix& m);

struct SystematizeResult {
    BitMatrix matrix;        // [I_K | P]
    Permutation column_perm; // identity unless pivot search forced swaps
};

// Gauss-Jordan elimination to [I_K | P]. Columns are scanned left to right;
// a column with no pivot available is swapped with the nearest later column
// that has one. Throws std::invalid_argument when rank < rows.
SystematizeResult systematize(const BitMatrix& m);

}  // namespace osd
