#include "rfnse/preconditioners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rfnse {

namespace {

void check_omega(double omega)
{
    if (!(omega > 0.0)) {
        throw std::invalid_argument("preconditioner parameter omega must be positive");
    }
}

void check_lengths(std::size_t expected, std::size_t nr, std::size_t nx)
{
    if (nr != expected || nx != expected) {
        throw std::invalid_argument("preconditioner of size " + std::to_string(expected) +
                                    " applied to vectors of size " + std::to_string(nr) + "/" + std::to_string(nx));
    }
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

void solve_diagonal_stage(double omega, const DiagonalBlock& D, std::span<const double> w, std::span<double> x)
{
    const std::size_t n = D.size();
    const double a = omega + 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = D.d[i];
        const double inv = 1.0 / (a * a + d * d);
        const double w1 = w[i];
        const double w2 = w[n + i];
        x[i] = (a * w1 + d * w2) * inv;
        x[n + i] = (a * w2 - d * w1) * inv;
    }
}

// ---------------------------------------------------------------------------

DenseSkewSolver::DenseSkewSolver(double omega, const SymmetricOperator& T) : omega_(omega)
{
    check_omega(omega);
    const std::size_t n = T.size();
    if (n > kDenseLimit) {
        throw std::invalid_argument("dense Toeplitz path limited to n <= " + std::to_string(kDenseLimit));
    }
    const auto dense = T.dense();
    T_ = Eigen::Map<const Eigen::MatrixXd>(dense.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    T_ = 0.5 * (T_ + T_.transpose()).eval();
    Eigen::MatrixXd normal = T_ * T_;
    normal.diagonal().array() += omega * omega;
    chol_.compute(normal);
    if (chol_.info() != Eigen::Success) {
        throw std::runtime_error("Cholesky factorization of w^2 I + T^2 failed");
    }
}

void DenseSkewSolver::solve(std::span<const double> s, std::span<double> w) const
{
    const auto n = static_cast<Eigen::Index>(half());
    Eigen::Map<const Eigen::VectorXd> sz(s.data(), n);
    Eigen::Map<const Eigen::VectorXd> sy(s.data() + n, n);
    Eigen::VectorXd wy = chol_.solve(omega_ * sy + T_ * sz);
    Eigen::VectorXd wz = (sz - T_ * wy) / omega_;
    std::copy(wz.data(), wz.data() + n, w.begin());
    std::copy(wy.data(), wy.data() + n, w.begin() + n);
}

// ---------------------------------------------------------------------------

TauPreconditioner::TauPreconditioner(double omega, std::shared_ptr<const TauOp> tau, DiagonalBlock D)
    : omega_(omega), tau_(std::move(tau)), D_(std::move(D))
{
    check_omega(omega);
    if (!tau_ || tau_->size() != D_.size()) {
        throw std::invalid_argument("TauPreconditioner: tau operator and diagonal disagree in size");
    }
}

void TauPreconditioner::apply_inverse(std::span<const double> r, std::span<double> x) const
{
    check_lengths(size(), r.size(), x.size());
    const std::size_t n = D_.size();
    const auto& dst = tau_->dst();
    const auto eigs = tau_->eigenvalues();
    fft::AlignedBuffer<double> a(n), b(n), sz(n), sy(n);

    std::copy(r.begin(), r.begin() + n, a.data());
    dst.execute(a.data(), sz.data());
    std::copy(r.begin() + n, r.end(), a.data());
    dst.execute(a.data(), sy.data());

    // 2w and both transform scalings folded into one factor per mode.
    const double s = dst.orthonormal_scale();
    const double w = omega_;
    const double pre = 2.0 * w * s * s;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = eigs[i];
        const double f = pre / (w * w + lam * lam);
        const double z1 = sz[i];
        const double y1 = sy[i];
        a[i] = f * (w * z1 - lam * y1);
        b[i] = f * (lam * z1 + w * y1);
    }
    dst.execute(a.data(), sz.data());
    dst.execute(b.data(), sy.data());

    std::vector<double> v(2 * n);
    std::copy(sz.data(), sz.data() + n, v.begin());
    std::copy(sy.data(), sy.data() + n, v.begin() + static_cast<std::ptrdiff_t>(n));
    solve_diagonal_stage(omega_, D_, v, x);
}

// ---------------------------------------------------------------------------

CirculantPreconditioner::CirculantPreconditioner(double omega, std::shared_ptr<const CirculantOp> circ,
                                                 DiagonalBlock D)
    : omega_(omega), circ_(std::move(circ)), D_(std::move(D))
{
    check_omega(omega);
    if (!circ_ || circ_->size() != D_.size()) {
        throw std::invalid_argument("CirculantPreconditioner: circulant and diagonal disagree in size");
    }
}

double CirculantPreconditioner::apply_inverse_checked(std::span<const double> r, std::span<double> x) const
{
    check_lengths(size(), r.size(), x.size());
    const std::size_t n = D_.size();
    const auto& dft = circ_->dft();
    const auto eigs = circ_->eigenvalues();
    fft::AlignedBuffer<cplx> a(n), sz(n), sy(n);

    std::copy(r.begin(), r.begin() + n, a.data());
    dft.forward(a.data(), sz.data());
    std::copy(r.begin() + n, r.end(), a.data());
    dft.forward(a.data(), sy.data());

    const double w = omega_;
    const double pre = 2.0 * w / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx g = eigs[i];
        const cplx f = pre / (w * w + g * g);
        const cplx z1 = sz[i];
        const cplx y1 = sy[i];
        sz[i] = f * (w * z1 - g * y1);
        sy[i] = f * (g * z1 + w * y1);
    }
    fft::AlignedBuffer<cplx> bz(n), by(n);
    dft.backward(sz.data(), bz.data());
    dft.backward(sy.data(), by.data());

    double residue = 0.0;
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = bz[i].real();
        v[n + i] = by[i].real();
        residue = std::max({residue, std::abs(bz[i].imag()), std::abs(by[i].imag())});
    }
    const double rn = norm2(r);
    const double ratio = rn > 0.0 ? residue / rn : residue;
    if (ratio > 1e-8) {
        throw std::runtime_error("circulant preconditioner: imaginary residue " + std::to_string(ratio) +
                                 " relative to ||r|| exceeds 1e-8");
    }
    solve_diagonal_stage(omega_, D_, v, x);
    return ratio;
}

void CirculantPreconditioner::apply_inverse(std::span<const double> r, std::span<double> x) const
{
    (void)apply_inverse_checked(r, x);
}

// ---------------------------------------------------------------------------

ExactPreconditioner::ExactPreconditioner(double omega, const SymmetricOperator& T, DiagonalBlock D)
    : omega_(omega), skew_(omega, T), D_(std::move(D))
{
    if (T.size() != D_.size()) {
        throw std::invalid_argument("ExactPreconditioner: Toeplitz part and diagonal disagree in size");
    }
}

void ExactPreconditioner::apply_inverse(std::span<const double> r, std::span<double> x) const
{
    check_lengths(size(), r.size(), x.size());
    std::vector<double> s(r.begin(), r.end());
    for (double& v : s) {
        v *= 2.0 * omega_;
    }
    std::vector<double> w(s.size());
    skew_.solve(s, w);
    solve_diagonal_stage(omega_, D_, w, x);
}

// ---------------------------------------------------------------------------

BlockVector apply_tau_inverse(const TauPreconditioner& P, const BlockVector& r)
{
    BlockVector x(r.half());
    P.apply_inverse(r.values(), x.values());
    return x;
}

BlockVector apply_circulant_inverse(const CirculantPreconditioner& P, const BlockVector& r)
{
    BlockVector x(r.half());
    P.apply_inverse(r.values(), x.values());
    return x;
}

BlockVector apply_exact_inverse(double omega, const SymmetricOperator& T, const DiagonalBlock& D, const BlockVector& r)
{
    ExactPreconditioner P(omega, T, D);
    BlockVector x(r.half());
    P.apply_inverse(r.values(), x.values());
    return x;
}

}  // namespace rfnse
