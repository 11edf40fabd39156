#pragma once

#include <cmath>
#include <cstddef>

namespace osd {

struct WilsonInterval {
    double center = 0.0;
    double halfwidth = 0.0;
    double lo() const { return std::max(0.0, center - halfwidth); }
    double hi() const { return std::min(1.0, center + halfwidth); }
};

// 95% Wilson score interval for a binomial proportion
inline WilsonInterval wilson95(std::size_t successes, std::size_t trials) {
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    WilsonInterval w;
    w.center = (p + z2 / (2.0 * n)) / denom;
    w.halfwidth =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return w;
}

inline bool intervals_overlap(const WilsonInterval& a, const WilsonInterval& b) {
    return a.lo() <= b.hi() && b.lo() <= a.hi();
}

}  // namespace osd
