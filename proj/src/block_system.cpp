#include "rfnse/block_system.hpp"

#include <stdexcept>
#include <string>

namespace rfnse {

namespace {

void check_block(const BlockSystem& sys, std::size_t nx, std::size_t nout)
{
    const std::size_t n = sys.half();
    if (!sys.T || sys.T->size() != n) {
        throw std::invalid_argument("block system: Toeplitz part and diagonal disagree in size");
    }
    if (nx != 2 * n || nout != 2 * n) {
        throw std::invalid_argument("block system of half size " + std::to_string(n) +
                                    " applied to a vector of length " + std::to_string(nx));
    }
}

}  // namespace

BlockVector::BlockVector(std::vector<double> data) : data_(std::move(data))
{
    if (data_.size() % 2 != 0) {
        throw std::invalid_argument("BlockVector needs an even length");
    }
}

BlockVector embed(std::span<const cplx> b)
{
    BlockVector f(b.size());
    auto z = f.z();
    auto y = f.y();
    for (std::size_t i = 0; i < b.size(); ++i) {
        z[i] = -b[i].real();
        y[i] = b[i].imag();
    }
    return f;
}

std::vector<cplx> lift(const BlockVector& x)
{
    const auto z = x.z();
    const auto y = x.y();
    std::vector<cplx> u(x.half());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = {y[i], z[i]};
    }
    return u;
}

BlockVector embed_unknown(std::span<const cplx> u)
{
    BlockVector x(u.size());
    auto z = x.z();
    auto y = x.y();
    for (std::size_t i = 0; i < u.size(); ++i) {
        z[i] = u[i].imag();
        y[i] = u[i].real();
    }
    return x;
}

BlockSystem make_block_system(std::shared_ptr<const SymmetricOperator> T, DiagonalBlock D, std::span<const cplx> rhs)
{
    if (!T || T->size() != D.size() || rhs.size() != D.size()) {
        throw std::invalid_argument("make_block_system: inconsistent sizes");
    }
    return {std::move(T), std::move(D), embed(rhs)};
}

void apply_T_block(const BlockSystem& sys, std::span<const double> x, std::span<double> out)
{
    check_block(sys, x.size(), out.size());
    const std::size_t n = sys.half();
    sys.T->apply(x.subspan(n, n), out.subspan(0, n));
    sys.T->apply(x.subspan(0, n), out.subspan(n, n));
    for (std::size_t i = n; i < 2 * n; ++i) {
        out[i] = -out[i];
    }
}

void apply_D_block(const BlockSystem& sys, std::span<const double> x, std::span<double> out)
{
    check_block(sys, x.size(), out.size());
    const std::size_t n = sys.half();
    const auto& d = sys.D.d;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = x[i];
        const double y = x[n + i];
        out[i] = z - d[i] * y;
        out[n + i] = d[i] * z + y;
    }
}

void apply_R(const BlockSystem& sys, std::span<const double> x, std::span<double> out)
{
    check_block(sys, x.size(), out.size());
    const std::size_t n = sys.half();
    std::vector<double> ty(n), tz(n);
    sys.T->apply(x.subspan(n, n), ty);
    sys.T->apply(x.subspan(0, n), tz);
    const auto& d = sys.D.d;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = x[i];
        const double y = x[n + i];
        out[i] = z + ty[i] - d[i] * y;
        out[n + i] = d[i] * z - tz[i] + y;
    }
}

BlockVector apply_R(const BlockSystem& sys, const BlockVector& x)
{
    BlockVector out(x.half());
    apply_R(sys, x.values(), out.values());
    return out;
}

BlockVector apply_T_block(const BlockSystem& sys, const BlockVector& x)
{
    BlockVector out(x.half());
    apply_T_block(sys, x.values(), out.values());
    return out;
}

BlockVector apply_D_block(const BlockSystem& sys, const BlockVector& x)
{
    BlockVector out(x.half());
    apply_D_block(sys, x.values(), out.values());
    return out;
}

}  // namespace rfnse
