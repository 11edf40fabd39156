#include "osd/gf2.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "osd/kernels.hpp"

namespace osd {

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("BitVector: bad character '" +
                                        std::string(1, bits[i]) + "'");
    }
    return v;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    if (len_ != o.len_)
        throw std::invalid_argument("BitVector: length mismatch in xor");
    kern::active().xor_words(w_.data(), o.w_.data(), w_.size());
    return *this;
}

std::size_t BitVector::popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : w_) n += std::popcount(w);
    return n;
}

bool BitVector::any() const {
    for (std::uint64_t w : w_)
        if (w) return true;
    return false;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitMatrix BitMatrix::identity(std::size_t k) {
    BitMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m.set(i, i, true);
    return m;
}

BitVector BitMatrix::column(std::size_t c) const {
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.set(r, r_[r].get(c));
    return v;
}

void BitMatrix::swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) {
        const bool va = r_[r].get(a);
        const bool vb = r_[r].get(b);
        r_[r].set(a, vb);
        r_[r].set(b, va);
    }
}

Permutation::Permutation(std::size_t n) : map_(n) {
    std::iota(map_.begin(), map_.end(), 0u);
}

Permutation Permutation::from_indices(std::vector<std::uint32_t> map) {
    std::vector<bool> seen(map.size(), false);
    for (std::uint32_t i : map) {
        if (i >= map.size() || seen[i])
            throw std::invalid_argument("Permutation: not a bijection");
        seen[i] = true;
    }
    Permutation p;
    p.map_ = std::move(map);
    return p;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i)
        if (map_[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i)
        inv[map_[i]] = static_cast<std::uint32_t>(i);
    Permutation p;
    p.map_ = std::move(inv);
    return p;
}

Permutation Permutation::then(const Permutation& next) const {
    std::vector<std::uint32_t> comp(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) comp[i] = map_[next.map_[i]];
    Permutation p;
    p.map_ = std::move(comp);
    return p;
}

BitVector Permutation::apply(const BitVector& v) const {
    BitVector out(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) out.set(i, v.get(map_[i]));
    return out;
}

BitMatrix Permutation::apply_columns(const BitMatrix& m) const {
    BitMatrix out(m.rows(), map_.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < map_.size(); ++c)
            out.set(r, c, m.get(r, map_[c]));
    return out;
}

BitVector mat_vec_mul(const BitMatrix& m, const BitVector& v) {
    if (v.size() != m.rows())
        throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitVector out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (v.get(i)) out ^= m.row(i);
    return out;
}

std::size_t gf2_rank(const BitMatrix& m) {
    std::vector<BitVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));

    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (rows[r].get(c)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

SystematizeResult systematize(const BitMatrix& m) {
    const std::size_t k = m.rows();
    const std::size_t n = m.cols();
    if (k > n) throw std::invalid_argument("systematize: more rows than cols");

    BitMatrix a = m;
    Permutation perm(n);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);

    for (std::size_t r = 0; r < k; ++r) {
        // pivot search in column r, rows r..k-1; on failure scan later columns
        std::size_t col = r;
        std::size_t pivot = k;
        for (; col < n; ++col) {
            pivot = r;
            while (pivot < k && !a.get(pivot, col)) ++pivot;
            if (pivot < k) break;
        }
        if (col == n) throw std::invalid_argument("systematize: rank deficient");
        if (col != r) {
            a.swap_columns(r, col);
            std::swap(order[r], order[col]);
        }
        if (pivot != r) std::swap(a.row(r), a.row(pivot));
        for (std::size_t rr = 0; rr < k; ++rr)
            if (rr != r && a.get(rr, r)) a.row(rr) ^= a.row(r);
    }
    return {std::move(a), Permutation::from_indices(std::move(order))};
}

}  // namespace osd
