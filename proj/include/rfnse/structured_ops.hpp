/// @file structured_ops.hpp
/// @brief Matrix-free Toeplitz, tau and circulant operators (1- and 2-level).
///
/// All operators are real symmetric, immutable after construction and apply
/// in O(n log n). Every apply allocates its own scratch, so concurrent applies
/// on distinct vectors are safe.
///
/// 2-level fields are M x M grids stored column-major, vec(U) with
/// U[j,k] = u_{j,k}: the x index j runs fastest. The 2-level Toeplitz matrix
/// is the Kronecker sum I (x) T_x + T_y (x) I.
#pragma once

#include "rfnse/stencil.hpp"
#include "rfnse/trig_transforms.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rfnse {

using cplx = std::complex<double>;

/// Real symmetric linear operator acting matrix-free.
class SymmetricOperator {
public:
    virtual ~SymmetricOperator() = default;

    [[nodiscard]] virtual std::size_t size() const noexcept = 0;
    /// y = A x; x and y must not alias.
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

    /// Complex action through the real and imaginary parts.
    void apply_complex(std::span<const cplx> x, std::span<cplx> y) const;
    /// Column-major n x n assembly by n unit-vector applies. Small sizes only.
    [[nodiscard]] std::vector<double> dense() const;

protected:
    void check_sizes(std::size_t nx, std::size_t ny) const;
};

/// T = mu * [c_|i-j|], M x M.
class ToeplitzOp final : public SymmetricOperator {
public:
    /// coeffs must hold at least M entries (c_0..c_{M-1}).
    ToeplitzOp(double mu, std::shared_ptr<const StencilCoeffs> coeffs, std::size_t m);
    /// Uses the coefficient cache.
    static std::shared_ptr<const ToeplitzOp> make(FractionalOrder alpha, double mu, std::size_t m);

    [[nodiscard]] std::size_t size() const noexcept override { return m_; }
    void apply(std::span<const double> x, std::span<double> y) const override;

    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] const StencilCoeffs& coeffs() const noexcept { return *coeffs_; }
    [[nodiscard]] FractionalOrder alpha() const noexcept { return coeffs_->alpha; }
    /// mu * c_k, zero for k >= M.
    [[nodiscard]] double entry(std::size_t k) const noexcept { return k < m_ ? mu_ * (*coeffs_)[k] : 0.0; }

    /// Scratch for one strided apply; reused across the lines of a 2-level apply.
    struct Workspace {
        explicit Workspace(std::size_t embed);
        fft::AlignedBuffer<double> real;
        fft::AlignedBuffer<cplx> spectrum;
    };
    [[nodiscard]] Workspace make_workspace() const { return Workspace(embed_); }
    /// y[i*ys] (+)= (T x)[i] with x read at stride xs.
    void apply_strided(Workspace& ws, const double* x, std::size_t xs, double* y, std::size_t ys,
                       bool accumulate) const;

private:
    double mu_;
    std::shared_ptr<const StencilCoeffs> coeffs_;
    std::size_t m_;
    std::size_t embed_;  // circulant embedding length 2M
    std::shared_ptr<const fft::RealDft> dft_;
    std::vector<cplx> symbol_;  // embedding spectrum, pre-scaled by 1/embed_
};

/// I (x) T_x + T_y (x) I on M x M fields.
class Toeplitz2Op final : public SymmetricOperator {
public:
    Toeplitz2Op(std::shared_ptr<const ToeplitzOp> tx, std::shared_ptr<const ToeplitzOp> ty);

    [[nodiscard]] std::size_t size() const noexcept override { return m_ * m_; }
    [[nodiscard]] std::size_t side() const noexcept { return m_; }
    void apply(std::span<const double> x, std::span<double> y) const override;

    [[nodiscard]] const ToeplitzOp& tx() const noexcept { return *tx_; }
    [[nodiscard]] const ToeplitzOp& ty() const noexcept { return *ty_; }

private:
    std::shared_ptr<const ToeplitzOp> tx_;
    std::shared_ptr<const ToeplitzOp> ty_;
    std::size_t m_;
};

/// tau-matrix approximation, diagonalized by the sine transform:
/// tau(T) = S diag(eigs) S (1-level) or (S (x) S) diag (S (x) S) (2-level).
class TauOp final : public SymmetricOperator {
public:
    [[nodiscard]] std::size_t size() const noexcept override { return eigs_.size(); }
    [[nodiscard]] std::size_t side() const noexcept { return m_; }
    [[nodiscard]] int levels() const noexcept { return levels_; }
    void apply(std::span<const double> x, std::span<double> y) const override;

    /// All eigenvalues in transform order (2-level: eig_x[i] + eig_y[j] at i + j*M).
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigs_; }
    /// Raw DST-I (unnormalized); scale with dst().orthonormal_scale().
    [[nodiscard]] const fft::SineDft& dst() const noexcept { return *dst_; }

private:
    friend TauOp tau_from_toeplitz(const ToeplitzOp& op);
    friend TauOp tau2_from_toeplitz(const Toeplitz2Op& op);
    TauOp(std::size_t m, int levels, std::vector<double> eigs);

    std::size_t m_;
    int levels_;
    std::vector<double> eigs_;
    std::shared_ptr<const fft::SineDft> dst_;
};

/// Strang circulant approximation, diagonalized by the DFT.
class CirculantOp final : public SymmetricOperator {
public:
    [[nodiscard]] std::size_t size() const noexcept override { return eigs_.size(); }
    [[nodiscard]] std::size_t side() const noexcept { return m_; }
    [[nodiscard]] int levels() const noexcept { return levels_; }
    void apply(std::span<const double> x, std::span<double> y) const override;

    /// DFT of the first column (2-level: Kronecker sums), transform order.
    [[nodiscard]] std::span<const cplx> eigenvalues() const noexcept { return eigs_; }
    [[nodiscard]] const fft::ComplexDft& dft() const noexcept { return *dft_; }
    /// First column of the 1-level circulant.
    [[nodiscard]] std::span<const double> first_column() const noexcept { return column_; }

private:
    friend CirculantOp circulant_from_toeplitz(const ToeplitzOp& op);
    friend CirculantOp circulant_from_toeplitz(const Toeplitz2Op& op);
    CirculantOp(std::size_t m, int levels, std::vector<double> column, std::vector<cplx> eigs);

    std::size_t m_;
    int levels_;
    std::vector<double> column_;
    std::vector<cplx> eigs_;
    std::shared_ptr<const fft::ComplexDft> dft_;
};

/// Nonnegative diagonal D_d of a time-level system.
struct DiagonalBlock {
    std::vector<double> d;
    double lambda_max = 0.0;

    /// Validates d >= 0 and records the maximum entry.
    static DiagonalBlock from_entries(std::vector<double> d);
    [[nodiscard]] std::size_t size() const noexcept { return d.size(); }
};

[[nodiscard]] std::vector<double> toeplitz_apply(const ToeplitzOp& op, std::span<const double> x);
[[nodiscard]] std::vector<cplx> toeplitz_apply(const ToeplitzOp& op, std::span<const cplx> x);
[[nodiscard]] std::vector<double> toeplitz2_apply(const Toeplitz2Op& op, std::span<const double> x);

/// First column of tau(T): v_i = t_i - t_{i+2} with t_k = 0 beyond the matrix.
[[nodiscard]] std::vector<double> tau_first_column(const ToeplitzOp& op);
[[nodiscard]] TauOp tau_from_toeplitz(const ToeplitzOp& op);
[[nodiscard]] TauOp tau2_from_toeplitz(const Toeplitz2Op& op);
/// Requires M >= 2.
[[nodiscard]] CirculantOp circulant_from_toeplitz(const ToeplitzOp& op);
[[nodiscard]] CirculantOp circulant_from_toeplitz(const Toeplitz2Op& op);

/// Dispatch on the dynamic type (ToeplitzOp or Toeplitz2Op).
[[nodiscard]] std::shared_ptr<const TauOp> make_tau(const SymmetricOperator& t);
[[nodiscard]] std::shared_ptr<const CirculantOp> make_circulant(const SymmetricOperator& t);

}  // namespace rfnse
