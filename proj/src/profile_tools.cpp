#include "rydsim/profile_tools.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rydsim {

QuadratureRule gauss_legendre(std::size_t order, double lo, double hi)
{
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    const std::size_t n = order;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                const double kk = static_cast<double>(k);
                p0 = ((2.0 * kk + 1.0) * x * p1 - kk * p2) / (kk + 1.0);
            }
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

std::vector<double> squared_magnitude(std::span<const cplx> f)
{
    std::vector<double> out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [](const cplx& v) { return std::norm(v); });
    return out;
}

double trapezoid(std::span<const double> f, double dz)
{
    if (f.size() < 2) {
        return 0.0;
    }
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        sum += f[i];
    }
    return sum * dz;
}

double parabolic_peak(std::span<const double> f)
{
    if (f.empty()) {
        return 0.0;
    }
    const auto it = std::max_element(f.begin(), f.end());
    const std::size_t i = static_cast<std::size_t>(it - f.begin());
    if (i == 0 || i + 1 >= f.size()) {
        return static_cast<double>(i);
    }
    const double left = f[i - 1];
    const double mid = f[i];
    const double right = f[i + 1];
    const double denom = left - 2.0 * mid + right;
    if (denom >= 0.0) {
        return static_cast<double>(i);
    }
    return static_cast<double>(i) + 0.5 * (left - right) / denom;
}

std::vector<bool> half_max_mask(std::span<const double> f)
{
    std::vector<bool> mask(f.size(), false);
    if (f.empty()) {
        return mask;
    }
    const double peak = *std::max_element(f.begin(), f.end());
    if (!(peak > 0.0)) {
        return mask;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        mask[i] = f[i] >= 0.5 * peak;
    }
    return mask;
}

}  // namespace rydsim
