#include "osd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace osd {

ChannelParams ChannelParams::from_ebn0(double ebn0_db, double rate) {
    if (rate <= 0.0 || rate >= 1.0)
        throw std::invalid_argument("ChannelParams: rate must be in (0,1)");
    ChannelParams p;
    p.ebn0_db = ebn0_db;
    p.rate = rate;
    p.sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
    return p;
}

std::vector<double> modulate(const BitVector& c) {
    std::vector<double> x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = c.get(i) ? 1.0 : -1.0;
    return x;
}

std::vector<double> transmit(std::span<const double> x,
                             const ChannelParams& params, RngStream& rng) {
    if (params.sigma2 <= 0.0)
        throw std::invalid_argument("transmit: sigma2 must be positive");
    const double sigma = std::sqrt(params.sigma2);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] + sigma * rng.next_gaussian();
    return y;
}

double estimate_sigma2(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("estimate_sigma2: empty input");
    double acc = 0.0;
    for (double v : y) acc += v * v;
    return std::max(1e-6, acc / static_cast<double>(y.size()) - 1.0);
}

double ebn0_db_from_sigma2(double sigma2, double rate) {
    return 10.0 * std::log10(1.0 / (2.0 * rate * sigma2));
}

}  // namespace osd
