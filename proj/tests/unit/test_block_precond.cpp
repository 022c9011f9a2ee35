#include "oracles.hpp"
#include "rfnse/block_system.hpp"
#include "rfnse/preconditioners.hpp"

#include <doctest.h>

#include <Eigen/LU>

using namespace rfnse;

namespace {

struct Instance {
    std::shared_ptr<const SymmetricOperator> T;
    oracle::Mat dense;  // T
    std::vector<double> d;
    int levels;
};

Instance random_instance(oracle::Rng& rng, bool allow_2d = true)
{
    Instance in;
    const double a = rng.uniform(1.05, 2.0);
    const double mu = rng.uniform(0.01, 20.0);
    in.levels = allow_2d && rng.integer(0, 2) == 0 ? 2 : 1;
    if (in.levels == 1) {
        const int m = rng.integer(2, 48);
        in.T = ToeplitzOp::make(FractionalOrder(a), mu, m);
        in.dense = oracle::toeplitz(a, mu, m);
    } else {
        const int m = rng.integer(2, 7);
        const auto t = ToeplitzOp::make(FractionalOrder(a), mu, m);
        in.T = std::make_shared<Toeplitz2Op>(t, t);
        const oracle::Mat t1 = oracle::toeplitz(a, mu, m);
        in.dense = oracle::kron_sum(t1, t1);
    }
    in.d = rng.nonneg(in.dense.rows(), rng.uniform(0.0, 3.0));
    return in;
}

oracle::Mat dense_tau(const Instance& in)
{
    if (in.levels == 1) return oracle::tau(in.dense);
    const auto& t2 = dynamic_cast<const Toeplitz2Op&>(*in.T);
    const auto m = static_cast<int>(t2.side());
    const oracle::Mat t1 = oracle::tau(oracle::toeplitz(t2.tx().alpha().value(), t2.tx().mu(), m));
    return oracle::kron_sum(t1, t1);
}

oracle::Mat dense_strang(const Instance& in)
{
    if (in.levels == 1) return oracle::strang(in.dense);
    const auto& t2 = dynamic_cast<const Toeplitz2Op&>(*in.T);
    const auto m = static_cast<int>(t2.side());
    const oracle::Mat c1 = oracle::strang(oracle::toeplitz(t2.tx().alpha().value(), t2.tx().mu(), m));
    return oracle::kron_sum(c1, c1);
}

}  // namespace

TEST_SUITE("block_system") {

TEST_CASE("embedding maps the complex system onto R")
{
    oracle::Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto in = random_instance(rng);
        const auto n = in.dense.rows();
        // Complex matrix D - T + iI and a random solution u.
        oracle::CMat A = (-in.dense).cast<cplx>();
        for (Eigen::Index i = 0; i < n; ++i) A(i, i) += cplx(in.d[i], 1.0);
        const auto u = rng.cvec(n);
        const oracle::CVec b = A * Eigen::Map<const oracle::CVec>(u.data(), n);
        std::vector<cplx> bv(b.data(), b.data() + n);

        const auto sys = make_block_system(in.T, DiagonalBlock::from_entries(in.d), bv);
        const auto x = embed_unknown(u);
        const auto rx = apply_R(sys, x);
        CHECK(oracle::rel_err(rx.values(), oracle::to_eigen(sys.f.values())) <= 1e-12);

        const oracle::Vec dense_rx = oracle::block_R(in.dense, in.d) * oracle::to_eigen(x.values());
        CHECK(oracle::rel_err(rx.values(), dense_rx) <= 1e-12);

        const auto back = lift(x);
        for (Eigen::Index i = 0; i < n; ++i) CHECK(back[i] == u[i]);
    }
}

TEST_CASE("R splits into the anti-symmetric and diagonal parts")
{
    oracle::Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto in = random_instance(rng);
        const auto n = in.dense.rows();
        const auto sys = make_block_system(in.T, DiagonalBlock::from_entries(in.d), std::vector<cplx>(n));
        BlockVector x(rng.vec(2 * n));
        const auto r = apply_R(sys, x);
        const auto t = apply_T_block(sys, x);
        const auto d = apply_D_block(sys, x);
        for (Eigen::Index i = 0; i < 2 * n; ++i) CHECK(std::abs(r.values()[i] - t.values()[i] - d.values()[i]) <= 1e-12 * (1 + std::abs(r.values()[i])));
        // <x, T x> = 0 for the anti-symmetric block.
        CHECK(std::abs(oracle::to_eigen(x.values()).dot(oracle::to_eigen(t.values()))) <=
              1e-10 * oracle::to_eigen(x.values()).squaredNorm() * (1 + in.dense.norm()));
    }
}

TEST_CASE("embed sign convention")
{
    const std::vector<cplx> b{{1.0, 2.0}, {-3.0, 4.0}};
    const auto f = embed(b);
    CHECK(f.z()[0] == -1.0);
    CHECK(f.z()[1] == 3.0);
    CHECK(f.y()[0] == 2.0);
    CHECK(f.y()[1] == 4.0);
}

}

TEST_SUITE("preconditioners") {

TEST_CASE("tau preconditioner inverse matches dense LU")
{
    oracle::Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        const auto in = random_instance(rng);
        const double omega = rng.uniform(0.2, 3.0);
        const TauPreconditioner P(omega, make_tau(*in.T), DiagonalBlock::from_entries(in.d));
        const auto n = in.dense.rows();
        BlockVector r(rng.vec(2 * n));
        const auto x = apply_tau_inverse(P, r);
        const oracle::Vec want = oracle::block_F(omega, dense_tau(in), in.d).partialPivLu().solve(oracle::to_eigen(r.values()));
        CHECK(oracle::rel_err(x.values(), want) <= 1e-10);
    }
}

TEST_CASE("circulant preconditioner inverse matches dense LU")
{
    oracle::Rng rng(44);
    for (int trial = 0; trial < 60; ++trial) {
        const auto in = random_instance(rng);
        const double omega = rng.uniform(0.2, 3.0);
        const CirculantPreconditioner P(omega, make_circulant(*in.T), DiagonalBlock::from_entries(in.d));
        const auto n = in.dense.rows();
        BlockVector r(rng.vec(2 * n));
        std::vector<double> x(2 * n);
        const double residue = P.apply_inverse_checked(r.values(), x);
        CHECK(residue <= 1e-10);
        const oracle::Vec want =
            oracle::block_F(omega, dense_strang(in), in.d).partialPivLu().solve(oracle::to_eigen(r.values()));
        CHECK(oracle::rel_err(x, want) <= 1e-10);
    }
}

TEST_CASE("exact preconditioner inverse matches dense LU")
{
    oracle::Rng rng(45);
    for (int trial = 0; trial < 60; ++trial) {
        const auto in = random_instance(rng);
        const double omega = rng.uniform(0.2, 3.0);
        const auto D = DiagonalBlock::from_entries(in.d);
        const auto n = in.dense.rows();
        BlockVector r(rng.vec(2 * n));
        const auto x = apply_exact_inverse(omega, *in.T, D, r);
        const oracle::Vec want = oracle::block_F(omega, in.dense, in.d).partialPivLu().solve(oracle::to_eigen(r.values()));
        CHECK(oracle::rel_err(x.values(), want) <= 1e-10);
    }
}

TEST_CASE("skew solver")
{
    oracle::Rng rng(46);
    for (int trial = 0; trial < 50; ++trial) {
        const auto in = random_instance(rng, false);
        const auto n = in.dense.rows();
        const double omega = rng.uniform(0.2, 3.0);
        DenseSkewSolver solver(omega, *in.T);
        const auto s = rng.vec(2 * n);
        std::vector<double> w(2 * n);
        solver.solve(s, w);
        oracle::Mat K(2 * n, 2 * n);
        K << omega * oracle::Mat::Identity(n, n), in.dense, -in.dense, omega * oracle::Mat::Identity(n, n);
        CHECK(oracle::rel_err(w, K.partialPivLu().solve(oracle::to_eigen(s))) <= 1e-10);
    }
}

TEST_CASE("diagonal stage")
{
    const auto D = DiagonalBlock::from_entries({0.0, 2.0});
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    std::vector<double> x(4);
    solve_diagonal_stage(1.0, D, w, x);
    // Entry 1: [[2, -2],[2, 2]] [z; y] = [1; 1] -> z = 0.5, y = 0.
    CHECK(x[1] == doctest::Approx(0.5));
    CHECK(x[3] == doctest::Approx(0.0));
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[2] == doctest::Approx(0.5));
}

}
