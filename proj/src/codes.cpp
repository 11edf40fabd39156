#include "osd/codes.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace osd {

Gf2mField::Gf2mField(unsigned m, std::uint32_t primitive_poly)
    : m_(m), order_((std::size_t(1) << m) - 1) {
    if (m == 0 || m > 16)
        throw std::invalid_argument("Gf2mField: degree out of range");
    alpha_to_.assign(order_, 0);
    index_of_.assign(std::size_t(1) << m, 0);

    std::uint32_t x = 1;
    std::set<std::uint32_t> seen;
    for (std::size_t e = 0; e < order_; ++e) {
        alpha_to_[e] = x;
        index_of_[x] = e;
        seen.insert(x);
        x <<= 1;
        if (x & (std::uint32_t(1) << m)) x ^= primitive_poly;
    }
    // alpha generates the whole group iff the polynomial is primitive
    if (x != 1 || seen.size() != order_)
        throw std::invalid_argument("Gf2mField: polynomial is not primitive");
}

std::size_t Gf2mField::log(std::uint32_t v) const {
    if (v == 0 || v > order_)
        throw std::invalid_argument("Gf2mField::log: not a unit");
    return index_of_[v];
}

std::uint32_t Gf2mField::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return alpha_to_[(log(a) + log(b)) % order_];
}

BitVector bch_generator_polynomial(const Gf2mField& field, unsigned first_root,
                                   unsigned last_root) {
    const std::size_t n = field.group_order();

    // union of cyclotomic cosets of the designated roots
    std::set<std::size_t> roots;
    for (unsigned r = first_root; r <= last_root; ++r) {
        std::size_t c = r % n;
        while (!roots.contains(c)) {
            roots.insert(c);
            c = (c * 2) % n;
        }
    }

    // g(x) = prod (x + alpha^r), coefficients tracked in GF(2^m)
    std::vector<std::uint32_t> g{1};
    for (std::size_t r : roots) {
        std::vector<std::uint32_t> next(g.size() + 1, 0);
        const std::uint32_t ar = field.alpha_pow(r);
        for (std::size_t i = 0; i < g.size(); ++i) {
            next[i + 1] ^= g[i];
            next[i] ^= field.mul(g[i], ar);
        }
        g = std::move(next);
    }

    BitVector out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > 1)
            throw std::runtime_error(
                "bch_generator_polynomial: coefficients not binary");
        out.set(i, g[i] == 1);
    }
    return out;
}

Code build_ebch_128_64() {
    const Gf2mField gf7(7, 0x89);  // x^7 + x^3 + 1
    const BitVector g = bch_generator_polynomial(gf7, 1, 20);
    const std::size_t deg = g.size() - 1;
    if (deg != 63)
        throw std::runtime_error("build_ebch_128_64: generator degree " +
                                 std::to_string(deg) + ", expected 63");

    const std::size_t n_cyclic = 127, k = 64;
    BitMatrix gen(k, n_cyclic + 1);
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t weight = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.get(i)) {
                gen.set(r, r + i, true);
                ++weight;
            }
        }
        // overall parity column makes every row (hence every codeword) even
        gen.set(r, n_cyclic, weight % 2 != 0);
    }
    return {{n_cyclic + 1, k, 22, "ebch128"}, std::move(gen)};
}

Code build_hamming(bool extended) {
    // systematic (7,4): parity columns cover the three weight-2 patterns
    // plus the all-ones pattern
    const bool parity[4][3] = {
        {true, true, false},
        {true, false, true},
        {false, true, true},
        {true, true, true},
    };
    const std::size_t n = extended ? 8 : 7;
    BitMatrix gen(4, n);
    for (std::size_t r = 0; r < 4; ++r) {
        gen.set(r, r, true);
        std::size_t weight = 1;
        for (std::size_t c = 0; c < 3; ++c) {
            if (parity[r][c]) {
                gen.set(r, 4 + c, true);
                ++weight;
            }
        }
        if (extended) gen.set(r, 7, weight % 2 != 0);
    }
    if (extended) return {{8, 4, 4, "ehamming84"}, std::move(gen)};
    return {{7, 4, 3, "hamming74"}, std::move(gen)};
}

Code load_generator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open generator file: " + path);

    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("generator file is empty: " + path);
    std::istringstream hs(header);
    std::size_t n = 0, k = 0;
    if (!(hs >> n >> k) || n == 0 || k == 0 || k >= n)
        throw std::runtime_error("bad generator header in " + path);

    BitMatrix gen(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("generator file truncated: " + path);
        if (line.size() == n + 1 && line.back() == '\r') line.pop_back();
        if (line.size() != n)
            throw std::runtime_error("row " + std::to_string(r) +
                                     " has wrong length in " + path);
        for (std::size_t c = 0; c < n; ++c) {
            if (line[c] == '1')
                gen.set(r, c, true);
            else if (line[c] != '0')
                throw std::runtime_error("bad character in generator file " +
                                         path);
        }
    }
    if (gf2_rank(gen) != k)
        throw std::runtime_error("generator matrix is rank deficient: " + path);

    CodeSpec spec{n, k, 1, std::filesystem::path(path).stem().string()};
    return {std::move(spec), std::move(gen)};
}

void save_generator(const std::string& path, const BitMatrix& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write generator file: " + path);
    out << g.cols() << ' ' << g.rows() << '\n';
    for (std::size_t r = 0; r < g.rows(); ++r)
        out << g.row(r).to_string() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Code resolve_code(const std::string& name_or_path) {
    if (name_or_path == "ebch128") return build_ebch_128_64();
    if (name_or_path == "hamming74") return build_hamming(false);
    if (name_or_path == "ehamming84") return build_hamming(true);
    return load_generator(name_or_path);
}

}  // namespace osd
