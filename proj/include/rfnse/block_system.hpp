/// @file block_system.hpp
/// @brief Real 2x2-block form of (D - T + iI) u = b and its TBAN splitting.
///
/// With u = y + i z and b = p + i q the complex system is equivalent to
///
///     R [z; y] = [[I, T - D], [D - T, I]] [z; y] = [-p; q] = f,
///
/// whose symmetric part is the identity. The splitting R = 𝒯 + 𝒟 has
/// 𝒯 = [[0, T], [-T, 0]] (anti-symmetric) and 𝒟 = [[I, -D], [D, I]] (normal).
#pragma once

#include "rfnse/structured_ops.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rfnse {

/// Real vector pair [z; y] stored as one contiguous array, z first.
class BlockVector {
public:
    BlockVector() = default;
    explicit BlockVector(std::size_t n) : data_(2 * n, 0.0) {}
    explicit BlockVector(std::vector<double> data);

    [[nodiscard]] std::size_t half() const noexcept { return data_.size() / 2; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::span<double> z() noexcept { return {data_.data(), half()}; }
    [[nodiscard]] std::span<const double> z() const noexcept { return {data_.data(), half()}; }
    [[nodiscard]] std::span<double> y() noexcept { return {data_.data() + half(), half()}; }
    [[nodiscard]] std::span<const double> y() const noexcept { return {data_.data() + half(), half()}; }
    [[nodiscard]] std::span<double> values() noexcept { return data_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
    [[nodiscard]] std::vector<double>& storage() noexcept { return data_; }

private:
    std::vector<double> data_;
};

struct BlockSystem {
    std::shared_ptr<const SymmetricOperator> T;
    DiagonalBlock D;
    BlockVector f;

    [[nodiscard]] std::size_t half() const noexcept { return D.size(); }
};

/// b = p + iq  ->  f = [-p; q].
[[nodiscard]] BlockVector embed(std::span<const cplx> b);
/// [z; y]  ->  u = y + iz.
[[nodiscard]] std::vector<cplx> lift(const BlockVector& x);
/// u = y + iz  ->  [z; y] (the unknown ordering, not the right-hand side map).
[[nodiscard]] BlockVector embed_unknown(std::span<const cplx> u);

[[nodiscard]] BlockSystem make_block_system(std::shared_ptr<const SymmetricOperator> T, DiagonalBlock D,
                                            std::span<const cplx> rhs);

/// out = R x = [z + (T - D) y; (D - T) z + y].
void apply_R(const BlockSystem& sys, std::span<const double> x, std::span<double> out);
/// out = 𝒯 x = [T y; -T z].
void apply_T_block(const BlockSystem& sys, std::span<const double> x, std::span<double> out);
/// out = 𝒟 x = [z - D y; D z + y].
void apply_D_block(const BlockSystem& sys, std::span<const double> x, std::span<double> out);

[[nodiscard]] BlockVector apply_R(const BlockSystem& sys, const BlockVector& x);
[[nodiscard]] BlockVector apply_T_block(const BlockSystem& sys, const BlockVector& x);
[[nodiscard]] BlockVector apply_D_block(const BlockSystem& sys, const BlockVector& x);

}  // namespace rfnse
