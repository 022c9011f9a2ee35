#include "rfnse/stencil.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace rfnse {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha)
{
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw std::invalid_argument("fractional order must satisfy 1 < alpha <= 2, got " +
                                    std::to_string(alpha));
    }
}

StencilCoeffs centered_coeffs(FractionalOrder alpha, std::size_t K)
{
    if (K < 1) {
        throw std::invalid_argument("stencil length K must be >= 1");
    }
    const double a = alpha.value();
    const double half = 0.5 * a;
    std::vector<double> c(K + 1, 0.0);
    const double g = std::tgamma(half + 1.0);
    c[0] = std::tgamma(a + 1.0) / (g * g);

    if (a == 2.0) {
        // Gamma(alpha/2 - k + 1) has poles for k >= 2: plain 3-point Laplacian.
        c[1] = -1.0;
        return {alpha, std::move(c)};
    }
    for (std::size_t k = 0; k < K; ++k) {
        const auto kd = static_cast<double>(k);
        c[k + 1] = c[k] * (kd - half) / (kd + 1.0 + half);
    }
    return {alpha, std::move(c)};
}

std::shared_ptr<const StencilCoeffs> cached_coeffs(FractionalOrder alpha, std::size_t K)
{
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, std::shared_ptr<const StencilCoeffs>> cache;

    const auto key = std::make_pair(alpha.value(), K);
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) {
        return it->second;
    }
    auto coeffs = std::make_shared<const StencilCoeffs>(centered_coeffs(alpha, K));
    cache.emplace(key, coeffs);
    return coeffs;
}

TailConstants tail_constants(FractionalOrder alpha)
{
    const double a = alpha.value();
    const double pi = std::numbers::pi;
    const double common = std::tgamma(a + 1.0) * std::sin(0.5 * pi * a) / (pi * a);
    const double p = 5.0 + 0.5 * a;
    const double theta = std::pow(1.0 - (1.0 + a) / p, p) * std::exp(1.0 + a) * common;
    const double theta0 = std::numbers::sqrt2 * std::exp(13.0 / 12.0) * common;
    return {theta, theta0};
}

TailBracket tail_bound(FractionalOrder alpha, int k0)
{
    if (k0 < 3) {
        throw std::invalid_argument("tail_bound requires k0 >= 3");
    }
    const auto [theta, theta0] = tail_constants(alpha);
    const double a = alpha.value();
    return {theta / std::pow(k0 + 0.5, a), theta0 / std::pow(k0 - 1.0, a)};
}

}  // namespace rfnse
