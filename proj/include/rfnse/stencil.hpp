/// @file stencil.hpp
/// @brief Fractional centered-difference coefficients for the Riesz derivative.
///
/// The second-order centered stencil approximates the 1D Riesz derivative of
/// order alpha by -(1/h^alpha) * sum_k c_{j-k} u_k with
///
///     c_k = (-1)^k Gamma(alpha+1) / [Gamma(alpha/2-k+1) Gamma(alpha/2+k+1)].
///
/// The sequence is even in k, c_0 > 0, c_k <= 0 for k >= 1 and the two-sided
/// off-center sum equals c_0.
#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace rfnse {

/// Order of the Riesz derivative, restricted to 1 < alpha <= 2.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double alpha_;
};

struct StencilCoeffs {
    FractionalOrder alpha;
    std::vector<double> c;  ///< c_0 .. c_K, index = lag

    [[nodiscard]] std::size_t size() const noexcept { return c.size(); }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return c[k]; }
};

/// c_0..c_K by the ratio recurrence c_{k+1} = c_k (k - alpha/2)/(k + 1 + alpha/2).
/// Throws std::invalid_argument for K < 1.
[[nodiscard]] StencilCoeffs centered_coeffs(FractionalOrder alpha, std::size_t K);

/// Same as centered_coeffs, memoized per (alpha, K). Thread-safe.
[[nodiscard]] std::shared_ptr<const StencilCoeffs> cached_coeffs(FractionalOrder alpha, std::size_t K);

/// The two constants bounding the stencil tail:
///   theta  = (1 - (1+a)/(5+a/2))^(5+a/2) e^(1+a) Gamma(a+1) sin(pi a/2) / (pi a)
///   theta0 = sqrt(2) e^(13/12) Gamma(a+1) sin(pi a/2) / (pi a)
struct TailConstants {
    double theta;
    double theta0;
};

[[nodiscard]] TailConstants tail_constants(FractionalOrder alpha);

struct TailBracket {
    double lower;
    double upper;
};

/// theta/(k0+1/2)^alpha < sum_{j>k0} |c_j| < theta0/(k0-1)^alpha, valid for k0 >= 3.
[[nodiscard]] TailBracket tail_bound(FractionalOrder alpha, int k0);

}  // namespace rfnse
