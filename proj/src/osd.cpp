#include "osd/osd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "osd/kernels.hpp"

namespace osd {

OsdContext build_context(std::span<const double> y, const BitMatrix& g) {
    const std::size_t n = g.cols();
    const std::size_t k = g.rows();
    if (y.size() != n)
        throw std::invalid_argument("build_context: observation length");

    OsdContext ctx;
    ctx.n = n;
    ctx.k = k;

    // reliability order, stable so ties keep the original index order
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return std::abs(y[a]) > std::abs(y[b]);
                     });
    ctx.lambda1 = Permutation::from_indices(std::move(order));

    const BitMatrix g1 = ctx.lambda1.apply_columns(g);

    // greedy scan in reliability order, keeping rank-increasing columns;
    // incremental elimination against the basis collected so far
    std::vector<std::uint32_t> kept, rejected;
    kept.reserve(k);
    std::vector<std::pair<BitVector, std::size_t>> basis;  // reduced col, pivot
    for (std::uint32_t c = 0; c < n; ++c) {
        if (kept.size() == k) {
            rejected.push_back(c);
            continue;
        }
        BitVector col = g1.column(c);
        for (const auto& [vec, pivot] : basis)
            if (col.get(pivot)) col ^= vec;
        if (col.any()) {
            std::size_t pivot = 0;
            while (!col.get(pivot)) ++pivot;
            basis.emplace_back(std::move(col), pivot);
            kept.push_back(c);
        } else {
            rejected.push_back(c);
        }
    }
    if (kept.size() != k)
        throw std::invalid_argument("build_context: generator is rank deficient");

    kept.insert(kept.end(), rejected.begin(), rejected.end());
    ctx.lambda2 = Permutation::from_indices(std::move(kept));

    const BitMatrix g2 = ctx.lambda2.apply_columns(g1);
    SystematizeResult sys = systematize(g2);
    if (!sys.column_perm.is_identity())
        throw std::logic_error("build_context: basis columns not independent");
    ctx.g_sys = std::move(sys.matrix);

    ctx.z = ctx.lambda2.apply(ctx.lambda1.apply(std::vector<double>(
        y.begin(), y.end())));
    ctx.inv_total = ctx.lambda1.then(ctx.lambda2).inverse();

    ctx.z_hard = BitVector(k);
    for (std::size_t i = 0; i < k; ++i)
        ctx.z_hard.set(i, hard_decision(ctx.z[i]) == 1);

    ctx.a0 = mat_vec_mul(ctx.g_sys, ctx.z_hard);

    // scoring state
    ctx.flip_penalty.resize(k);
    ctx.base_msg_corr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = std::abs(ctx.z[i]);
        ctx.flip_penalty[i] = 2.0 * a;
        ctx.base_msg_corr += a;
    }
    ctx.z_tail.assign(ctx.z.begin() + k, ctx.z.end());
    ctx.z_sq_sum = 0.0;
    for (double v : ctx.z) ctx.z_sq_sum += v * v;

    const std::size_t tail = n - k;
    ctx.parity_words = (tail + 63) / 64;
    ctx.parity_rows.assign(k * ctx.parity_words, 0);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t j = 0; j < tail; ++j)
            if (ctx.g_sys.get(r, k + j))
                ctx.parity_rows[r * ctx.parity_words + (j >> 6)] |=
                    std::uint64_t(1) << (j & 63);
    ctx.a0_parity.assign(ctx.parity_words, 0);
    for (std::size_t j = 0; j < tail; ++j)
        if (ctx.a0.get(k + j))
            ctx.a0_parity[j >> 6] |= std::uint64_t(1) << (j & 63);

    return ctx;
}

namespace {

struct TierBest {
    double corr;
    std::vector<std::size_t> flips;
    std::uint64_t teps;
};

DecodeResult materialize(const OsdContext& ctx, const TierBest& best,
                         unsigned order) {
    const std::size_t k = ctx.k;
    BitVector a(ctx.n);
    BitVector msg = ctx.z_hard;
    for (std::size_t pos : best.flips) msg.flip(pos);
    for (std::size_t i = 0; i < k; ++i) a.set(i, msg.get(i));

    std::vector<std::uint64_t> parity = ctx.a0_parity;
    const auto& ops = kern::active();
    for (std::size_t pos : best.flips)
        ops.xor_words(parity.data(),
                      ctx.parity_rows.data() + pos * ctx.parity_words,
                      ctx.parity_words);
    for (std::size_t j = 0; j < ctx.n - k; ++j)
        a.set(k + j, (parity[j >> 6] >> (j & 63)) & 1u);

    DecodeResult res;
    res.codeword = ctx.inv_total.apply(a);
    res.order_used = order;
    res.teps_evaluated = best.teps;
    const double d2 = ctx.z_sq_sum - 2.0 * best.corr +
                      static_cast<double>(ctx.n);
    res.best_distance = std::sqrt(std::max(0.0, d2));
    return res;
}

}  // namespace

std::vector<DecodeResult> decode_orders(const OsdContext& ctx,
                                        unsigned max_order) {
    const std::size_t k = ctx.k;
    if (max_order > k)
        throw std::invalid_argument("decode_orders: order exceeds k");

    const auto& ops = kern::active();
    const std::size_t pw = ctx.parity_words;
    const std::size_t tail = ctx.n - k;

    double best_corr = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_flips;
    std::uint64_t teps = 0;

    std::vector<TierBest> tiers;
    tiers.reserve(max_order + 1);

    std::vector<std::uint64_t> parity(pw);
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> positions;

    for (unsigned w = 0; w <= max_order; ++w) {
        // lexicographic combinations of ranks; rank r flips position k-1-r,
        // so the least reliable basis positions flip first
        ranks.resize(w);
        std::iota(ranks.begin(), ranks.end(), std::size_t{0});
        bool more = true;
        while (more) {
            positions.resize(w);
            std::copy(ctx.a0_parity.begin(), ctx.a0_parity.end(),
                      parity.begin());
            double corr = ctx.base_msg_corr;
            for (unsigned j = 0; j < w; ++j) {
                const std::size_t pos = k - 1 - ranks[j];
                positions[j] = pos;
                corr -= ctx.flip_penalty[pos];
                ops.xor_words(parity.data(),
                              ctx.parity_rows.data() + pos * pw, pw);
            }
            corr += ops.signed_sum(parity.data(), ctx.z_tail.data(), tail);
            ++teps;
            if (corr > best_corr) {
                best_corr = corr;
                best_flips = positions;
            }

            // next combination
            if (w == 0) break;
            std::size_t i = w;
            while (i > 0) {
                --i;
                if (ranks[i] < k - w + i) {
                    ++ranks[i];
                    for (std::size_t j = i + 1; j < w; ++j)
                        ranks[j] = ranks[j - 1] + 1;
                    break;
                }
                if (i == 0) more = false;
            }
        }
        tiers.push_back({best_corr, best_flips, teps});
    }

    std::vector<DecodeResult> out;
    out.reserve(tiers.size());
    for (unsigned w = 0; w < tiers.size(); ++w)
        out.push_back(materialize(ctx, tiers[w], w));
    return out;
}

DecodeResult decode(const OsdContext& ctx, unsigned order) {
    return decode_orders(ctx, order).back();
}

DecodeResult decode_order0(const OsdContext& ctx) { return decode(ctx, 0); }

TepEnumerator::TepEnumerator(std::size_t k, unsigned max_weight)
    : k_(k), max_weight_(max_weight) {
    if (max_weight > k)
        throw std::invalid_argument("TepEnumerator: weight exceeds k");
}

bool TepEnumerator::advance() {
    // next lexicographic combination within the current weight class
    std::size_t w = ranks_.size();
    std::size_t i = w;
    while (i > 0) {
        --i;
        if (ranks_[i] < k_ - w + i) {
            ++ranks_[i];
            for (std::size_t j = i + 1; j < w; ++j) ranks_[j] = ranks_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

bool TepEnumerator::next(BitVector& out) {
    if (done_) return false;

    if (weight_ == 0) {
        out = BitVector(k_);
        weight_ = 1;
        if (max_weight_ == 0) done_ = true;
        else {
            ranks_.assign(1, 0);
        }
        return true;
    }

    out = BitVector(k_);
    for (std::size_t r : ranks_) out.set(k_ - 1 - r, true);

    if (!advance()) {
        ++weight_;
        if (weight_ > max_weight_) {
            done_ = true;
        } else {
            ranks_.resize(weight_);
            std::iota(ranks_.begin(), ranks_.end(), std::size_t{0});
        }
    }
    return true;
}

std::uint64_t tep_count(std::size_t k, unsigned order) {
    if (order > k) throw std::invalid_argument("tep_count: order exceeds k");
    unsigned __int128 total = 0;
    unsigned __int128 binom = 1;
    for (unsigned i = 0; i <= order; ++i) {
        if (i > 0) binom = binom * (k - i + 1) / i;
        total += binom;
        if (total > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("tep_count: exceeds uint64 range");
    }
    return static_cast<std::uint64_t>(total);
}

unsigned asymptotic_order(unsigned d_min, std::size_t k) {
    if (d_min < 1 || k < 1)
        throw std::invalid_argument("asymptotic_order: bad arguments");
    const std::size_t by_distance = (d_min - 1) / 4;  // == ceil(d_min/4 - 1)
    return static_cast<unsigned>(std::min(by_distance, k));
}

}  // namespace osd
