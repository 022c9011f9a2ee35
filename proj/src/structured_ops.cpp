#include "rfnse/structured_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rfnse {

void SymmetricOperator::check_sizes(std::size_t nx, std::size_t ny) const
{
    if (nx != size() || ny != size()) {
        throw std::invalid_argument("operator of size " + std::to_string(size()) + " applied to vectors of size " +
                                    std::to_string(nx) + "/" + std::to_string(ny));
    }
}

void SymmetricOperator::apply_complex(std::span<const cplx> x, std::span<cplx> y) const
{
    check_sizes(x.size(), y.size());
    const std::size_t n = x.size();
    std::vector<double> re(n), im(n), are(n), aim(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = x[i].real();
        im[i] = x[i].imag();
    }
    apply(re, are);
    apply(im, aim);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = {are[i], aim[i]};
    }
}

std::vector<double> SymmetricOperator::dense() const
{
    const std::size_t n = size();
    std::vector<double> a(n * n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply(e, std::span<double>(a.data() + j * n, n));
        e[j] = 0.0;
    }
    return a;
}

// ---------------------------------------------------------------------------

ToeplitzOp::Workspace::Workspace(std::size_t embed) : real(embed), spectrum(embed / 2 + 1) {}

ToeplitzOp::ToeplitzOp(double mu, std::shared_ptr<const StencilCoeffs> coeffs, std::size_t m)
    : mu_(mu), coeffs_(std::move(coeffs)), m_(m), embed_(2 * m)
{
    if (m == 0) {
        throw std::invalid_argument("ToeplitzOp: size must be positive");
    }
    if (!coeffs_ || coeffs_->size() < m) {
        throw std::invalid_argument("ToeplitzOp: need at least M stencil coefficients");
    }
    dft_ = std::make_shared<const fft::RealDft>(embed_);

    Workspace ws(embed_);
    std::fill(ws.real.data(), ws.real.data() + embed_, 0.0);
    ws.real[0] = entry(0);
    for (std::size_t k = 1; k < m_; ++k) {
        ws.real[k] = entry(k);
        ws.real[embed_ - k] = entry(k);
    }
    dft_->forward(ws.real.data(), ws.spectrum.data());
    const double inv = 1.0 / static_cast<double>(embed_);
    symbol_.resize(dft_->spectrum_size());
    for (std::size_t k = 0; k < symbol_.size(); ++k) {
        symbol_[k] = ws.spectrum[k] * inv;
    }
}

std::shared_ptr<const ToeplitzOp> ToeplitzOp::make(FractionalOrder alpha, double mu, std::size_t m)
{
    return std::make_shared<const ToeplitzOp>(mu, cached_coeffs(alpha, std::max<std::size_t>(m, 2) - 1), m);
}

void ToeplitzOp::apply_strided(Workspace& ws, const double* x, std::size_t xs, double* y, std::size_t ys,
                               bool accumulate) const
{
    double* buf = ws.real.data();
    for (std::size_t i = 0; i < m_; ++i) {
        buf[i] = x[i * xs];
    }
    std::fill(buf + m_, buf + embed_, 0.0);
    dft_->forward(buf, ws.spectrum.data());
    for (std::size_t k = 0; k < symbol_.size(); ++k) {
        ws.spectrum[k] *= symbol_[k];
    }
    dft_->backward(ws.spectrum.data(), buf);
    if (accumulate) {
        for (std::size_t i = 0; i < m_; ++i) {
            y[i * ys] += buf[i];
        }
    } else {
        for (std::size_t i = 0; i < m_; ++i) {
            y[i * ys] = buf[i];
        }
    }
}

void ToeplitzOp::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x.size(), y.size());
    Workspace ws(embed_);
    apply_strided(ws, x.data(), 1, y.data(), 1, false);
}

Toeplitz2Op::Toeplitz2Op(std::shared_ptr<const ToeplitzOp> tx, std::shared_ptr<const ToeplitzOp> ty)
    : tx_(std::move(tx)), ty_(std::move(ty)), m_(tx_ ? tx_->size() : 0)
{
    if (!tx_ || !ty_ || tx_->size() != ty_->size()) {
        throw std::invalid_argument("Toeplitz2Op: both 1-level factors must exist and share the size M");
    }
}

void Toeplitz2Op::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x.size(), y.size());
    auto wx = tx_->make_workspace();
    for (std::size_t k = 0; k < m_; ++k) {
        tx_->apply_strided(wx, x.data() + k * m_, 1, y.data() + k * m_, 1, false);
    }
    auto wy = ty_->make_workspace();
    for (std::size_t j = 0; j < m_; ++j) {
        ty_->apply_strided(wy, x.data() + j, m_, y.data() + j, m_, true);
    }
}

// ---------------------------------------------------------------------------

TauOp::TauOp(std::size_t m, int levels, std::vector<double> eigs)
    : m_(m), levels_(levels), eigs_(std::move(eigs)), dst_(std::make_shared<const fft::SineDft>(m, levels))
{
}

void TauOp::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x.size(), y.size());
    const std::size_t n = eigs_.size();
    fft::AlignedBuffer<double> a(n), b(n);
    std::copy(x.begin(), x.end(), a.data());
    dst_->execute(a.data(), b.data());
    const double s2 = dst_->orthonormal_scale() * dst_->orthonormal_scale();
    for (std::size_t i = 0; i < n; ++i) {
        b[i] *= s2 * eigs_[i];
    }
    dst_->execute(b.data(), a.data());
    std::copy(a.data(), a.data() + n, y.begin());
}

std::vector<double> tau_first_column(const ToeplitzOp& op)
{
    const std::size_t m = op.size();
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = op.entry(i) - op.entry(i + 2);
    }
    return v;
}

namespace {

std::vector<double> tau_line_eigenvalues(const ToeplitzOp& op)
{
    const std::size_t m = op.size();
    SineTransformPlan plan(m);
    const auto sv = dst_apply(plan, tau_first_column(op));
    const double norm = std::sqrt(2.0 / (static_cast<double>(m) + 1.0));
    std::vector<double> eigs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double s1k = norm * std::sin(std::numbers::pi * static_cast<double>(k + 1) / (static_cast<double>(m) + 1.0));
        eigs[k] = sv[k] / s1k;
    }
    return eigs;
}

std::vector<double> strang_column(const ToeplitzOp& op)
{
    const std::size_t m = op.size();
    if (m < 2) {
        throw std::invalid_argument("Strang circulant requires M >= 2");
    }
    std::vector<double> col(m);
    col[0] = op.entry(0);
    for (std::size_t k = 1; k <= m / 2; ++k) {
        col[k] = op.entry(k);
    }
    for (std::size_t k = m / 2 + 1; k < m; ++k) {
        col[k] = op.entry(m - k);
    }
    return col;
}

std::vector<cplx> circulant_line_eigenvalues(std::span<const double> col)
{
    const std::size_t m = col.size();
    fft::ComplexDft dft(m, 1);
    fft::AlignedBuffer<cplx> a(m), b(m);
    for (std::size_t k = 0; k < m; ++k) {
        a[k] = col[k];
    }
    dft.forward(a.data(), b.data());
    return {b.data(), b.data() + m};
}

}  // namespace

TauOp tau_from_toeplitz(const ToeplitzOp& op)
{
    return TauOp(op.size(), 1, tau_line_eigenvalues(op));
}

TauOp tau2_from_toeplitz(const Toeplitz2Op& op)
{
    const std::size_t m = op.side();
    const auto ex = tau_line_eigenvalues(op.tx());
    const auto ey = tau_line_eigenvalues(op.ty());
    std::vector<double> eigs(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            eigs[i + j * m] = ex[i] + ey[j];
        }
    }
    return TauOp(m, 2, std::move(eigs));
}

CirculantOp::CirculantOp(std::size_t m, int levels, std::vector<double> column, std::vector<cplx> eigs)
    : m_(m),
      levels_(levels),
      column_(std::move(column)),
      eigs_(std::move(eigs)),
      dft_(std::make_shared<const fft::ComplexDft>(m, levels))
{
}

void CirculantOp::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x.size(), y.size());
    const std::size_t n = eigs_.size();
    fft::AlignedBuffer<cplx> a(n), b(n);
    std::copy(x.begin(), x.end(), a.data());
    dft_->forward(a.data(), b.data());
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] *= eigs_[i] * inv;
    }
    dft_->backward(b.data(), a.data());
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = a[i].real();
    }
}

CirculantOp circulant_from_toeplitz(const ToeplitzOp& op)
{
    auto col = strang_column(op);
    auto eigs = circulant_line_eigenvalues(col);
    return CirculantOp(op.size(), 1, std::move(col), std::move(eigs));
}

CirculantOp circulant_from_toeplitz(const Toeplitz2Op& op)
{
    const std::size_t m = op.side();
    auto col = strang_column(op.tx());
    const auto ex = circulant_line_eigenvalues(col);
    const auto ey = circulant_line_eigenvalues(strang_column(op.ty()));
    std::vector<cplx> eigs(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            eigs[i + j * m] = ex[i] + ey[j];
        }
    }
    return CirculantOp(m, 2, std::move(col), std::move(eigs));
}

// ---------------------------------------------------------------------------

DiagonalBlock DiagonalBlock::from_entries(std::vector<double> d)
{
    double mx = 0.0;
    for (double v : d) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("diagonal block entries must be finite and nonnegative");
        }
        mx = std::max(mx, v);
    }
    return {std::move(d), mx};
}

std::vector<double> toeplitz_apply(const ToeplitzOp& op, std::span<const double> x)
{
    std::vector<double> y(x.size());
    op.apply(x, y);
    return y;
}

std::vector<cplx> toeplitz_apply(const ToeplitzOp& op, std::span<const cplx> x)
{
    std::vector<cplx> y(x.size());
    op.apply_complex(x, y);
    return y;
}

std::vector<double> toeplitz2_apply(const Toeplitz2Op& op, std::span<const double> x)
{
    std::vector<double> y(x.size());
    op.apply(x, y);
    return y;
}

std::shared_ptr<const TauOp> make_tau(const SymmetricOperator& t)
{
    if (const auto* one = dynamic_cast<const ToeplitzOp*>(&t)) {
        return std::make_shared<const TauOp>(tau_from_toeplitz(*one));
    }
    if (const auto* two = dynamic_cast<const Toeplitz2Op*>(&t)) {
        return std::make_shared<const TauOp>(tau2_from_toeplitz(*two));
    }
    throw std::invalid_argument("tau approximation needs a Toeplitz or 2-level Toeplitz operator");
}

std::shared_ptr<const CirculantOp> make_circulant(const SymmetricOperator& t)
{
    if (const auto* one = dynamic_cast<const ToeplitzOp*>(&t)) {
        return std::make_shared<const CirculantOp>(circulant_from_toeplitz(*one));
    }
    if (const auto* two = dynamic_cast<const Toeplitz2Op*>(&t)) {
        return std::make_shared<const CirculantOp>(circulant_from_toeplitz(*two));
    }
    throw std::invalid_argument("circulant approximation needs a Toeplitz or 2-level Toeplitz operator");
}

}  // namespace rfnse
