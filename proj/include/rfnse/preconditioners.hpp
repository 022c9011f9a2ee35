/// @file preconditioners.hpp
/// @brief Inverses of the TBAN-type preconditioners on the real block system.
///
/// Every preconditioner has the form
///
///     F = (1/2w) (wI + 𝒜)(wI + 𝒟),   𝒜 = [[0, A], [-A, 0]],
///
/// where A is T itself (exact), tau(T) (sine transform) or the Strang
/// circulant of T. F^{-1} r is computed in two stages: (wI + 𝒜) v = 2w r is
/// solved per transform mode with closed-form 2x2 inverses, then
/// (wI + 𝒟) x = v per grid entry. No inner iteration is involved.
#pragma once

#include "rfnse/block_system.hpp"
#include "rfnse/structured_ops.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>

namespace rfnse {

/// Largest half size for the dense (exact Toeplitz) paths.
inline constexpr std::size_t kDenseLimit = 4096;

class BlockPreconditioner {
public:
    virtual ~BlockPreconditioner() = default;
    /// Length 2n of the block vectors it acts on.
    [[nodiscard]] virtual std::size_t size() const noexcept = 0;
    /// x = F^{-1} r; r and x must not alias.
    virtual void apply_inverse(std::span<const double> r, std::span<double> x) const = 0;
};

/// Dense solver for (wI + 𝒯) w = s via the SPD reduction (w^2 I + T^2) w_y = w s_y + T s_z.
class DenseSkewSolver {
public:
    DenseSkewSolver(double omega, const SymmetricOperator& T);

    [[nodiscard]] std::size_t half() const noexcept { return static_cast<std::size_t>(T_.rows()); }
    void solve(std::span<const double> s, std::span<double> w) const;
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return T_; }

private:
    double omega_;
    Eigen::MatrixXd T_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
};

/// (wI + 𝒟)^{-1}, entrywise 2x2 solves.
void solve_diagonal_stage(double omega, const DiagonalBlock& D, std::span<const double> w, std::span<double> x);

class TauPreconditioner final : public BlockPreconditioner {
public:
    TauPreconditioner(double omega, std::shared_ptr<const TauOp> tau, DiagonalBlock D);

    [[nodiscard]] std::size_t size() const noexcept override { return 2 * D_.size(); }
    void apply_inverse(std::span<const double> r, std::span<double> x) const override;
    [[nodiscard]] double omega() const noexcept { return omega_; }

private:
    double omega_;
    std::shared_ptr<const TauOp> tau_;
    DiagonalBlock D_;
};

class CirculantPreconditioner final : public BlockPreconditioner {
public:
    CirculantPreconditioner(double omega, std::shared_ptr<const CirculantOp> circ, DiagonalBlock D);

    [[nodiscard]] std::size_t size() const noexcept override { return 2 * D_.size(); }
    void apply_inverse(std::span<const double> r, std::span<double> x) const override;
    /// Same as apply_inverse; returns max |imag residue| / ||r||_2 before it was dropped.
    double apply_inverse_checked(std::span<const double> r, std::span<double> x) const;
    [[nodiscard]] double omega() const noexcept { return omega_; }

private:
    double omega_;
    std::shared_ptr<const CirculantOp> circ_;
    DiagonalBlock D_;
};

/// The exact TBAN preconditioner, dense. Half size limited to kDenseLimit.
class ExactPreconditioner final : public BlockPreconditioner {
public:
    ExactPreconditioner(double omega, const SymmetricOperator& T, DiagonalBlock D);

    [[nodiscard]] std::size_t size() const noexcept override { return 2 * D_.size(); }
    void apply_inverse(std::span<const double> r, std::span<double> x) const override;

private:
    double omega_;
    DenseSkewSolver skew_;
    DiagonalBlock D_;
};

[[nodiscard]] BlockVector apply_tau_inverse(const TauPreconditioner& P, const BlockVector& r);
[[nodiscard]] BlockVector apply_circulant_inverse(const CirculantPreconditioner& P, const BlockVector& r);
[[nodiscard]] BlockVector apply_exact_inverse(double omega, const SymmetricOperator& T, const DiagonalBlock& D,
                                              const BlockVector& r);

}  // namespace rfnse
