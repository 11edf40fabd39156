#pragma once

#include <span>
#include <vector>

#include "osd/gf2.hpp"
#include "osd/rng.hpp"

// BPSK over the real binary-input AWGN channel with unit symbol energy.

namespace osd {

struct ChannelParams {
    double ebn0_db = 0.0;
    double rate = 0.0;    // K/N
    double sigma2 = 0.0;  // per-dimension noise variance

    // sigma2 = 1 / (2 * rate * 10^(ebn0_db/10))
    static ChannelParams from_ebn0(double ebn0_db, double rate);
};

// c_i = 0 -> -1, c_i = 1 -> +1
std::vector<double> modulate(const BitVector& c);

// y_i = x_i + w_i, w_i iid N(0, sigma2)
std::vector<double> transmit(std::span<const double> x,
                             const ChannelParams& params, RngStream& rng);

// moment estimator under unit symbol energy: max(1e-6, mean(y^2) - 1)
double estimate_sigma2(std::span<const double> y);

// inverse of the sigma2 mapping, for table lookups from an estimate
double ebn0_db_from_sigma2(double sigma2, double rate);

}  // namespace osd
