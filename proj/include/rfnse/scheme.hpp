/// @file scheme.hpp
/// @brief Three-level linearly implicit schemes for the Riesz fractional NLS in 1D and 2D.
///
/// Each step n >= 1 solves (D - T + iI) u^{n+1} = (iI + T - D) u^{n-1} with
/// D = rho*dt*diag|u^n|^2 and T the (2-level) fractional Toeplitz matrix scaled
/// by mu = dt/h^alpha. Level 1 comes from a linearized Crank-Nicolson step.
#pragma once

#include "rfnse/block_system.hpp"
#include "rfnse/solvers.hpp"
#include "rfnse/stencil.hpp"
#include "rfnse/structured_ops.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <vector>

namespace rfnse {

/// Uniform grid on [a,b] (1D) or [a,b]^2 (2D) with M interior nodes per axis.
struct GridSpec {
    int dim = 1;
    double a = -20.0;
    double b = 20.0;
    std::size_t M = 0;
    int N = 1;
    double t_end = 1.0;

    [[nodiscard]] double h() const noexcept { return (b - a) / static_cast<double>(M + 1); }
    [[nodiscard]] double dt() const noexcept { return t_end / N; }
    [[nodiscard]] std::size_t unknowns() const noexcept { return dim == 1 ? M : M * M; }
    /// Interior node coordinates x_1..x_M along one axis.
    [[nodiscard]] std::vector<double> nodes() const;
    void validate() const;
};

struct StateField {
    std::vector<cplx> u;
    int level = 0;
};

/// sech(x) e^{2ix} at the interior nodes.
[[nodiscard]] StateField initial_condition_1d(const GridSpec& grid);
/// (2/sqrt(pi)) exp(-(x^2+y^2)), column-major with x fastest.
[[nodiscard]] StateField initial_condition_2d(const GridSpec& grid);
[[nodiscard]] StateField initial_condition(const GridSpec& grid);

/// d_j = rho * dt * |u_j|^2.
[[nodiscard]] DiagonalBlock diagonal_from_state(const StateField& u, double rho, double dt);

/// T scaled by scale * dt/h^alpha; 1D ToeplitzOp or 2D Toeplitz2Op.
[[nodiscard]] std::shared_ptr<const SymmetricOperator> make_toeplitz(const GridSpec& grid, FractionalOrder alpha,
                                                                     double scale = 1.0);

/// b^{n+1} = (iI + T - D) u^{n-1}.
[[nodiscard]] std::vector<cplx> step_rhs(const StateField& u_prevprev, const DiagonalBlock& D,
                                         const SymmetricOperator& T);

struct TimeLevelSystem {
    DiagonalBlock D;
    std::shared_ptr<const SymmetricOperator> T;
    std::vector<cplx> rhs;
    double omega_hint = 1.0;  ///< sqrt(lambda_max^2 + 1)

    [[nodiscard]] BlockSystem block() const { return make_block_system(T, D, rhs); }
};

struct ProblemSpec {
    GridSpec grid;
    FractionalOrder alpha{1.5};
    double rho = 2.0;

    void validate() const;
};

/// Linear solver settings used for every time level.
struct StepSolver {
    Method method = Method::gmres;
    SolveOptions options;
    /// Replace options.omega by sqrt(lambda_max^2 + 1) of each level's diagonal.
    bool auto_omega = false;

    [[nodiscard]] SolveOptions resolve(const DiagonalBlock& D) const;
};

/// Linearized Crank-Nicolson step to level 1, two Picard sweeps. The nonlinear
/// coefficient uses the midpoint |(u^(s) + u^0)/2|^2, with u^(0) = u^0.
[[nodiscard]] StateField bootstrap_first_level(const ProblemSpec& spec, const StateField& u0,
                                               const StepSolver& solver);

/// Q^n = (h^d/2)(||u^{n+1}||^2 + ||u^n||^2).
[[nodiscard]] double mass(const StateField& u_n, const StateField& u_np1, const GridSpec& grid);
/// E^n = (h^d/2)[<A u^{n+1},u^{n+1}> + <A u^n,u^n>] - (rho h^d/2) sum |u^{n+1}|^2 |u^n|^2, A = T/dt.
[[nodiscard]] double energy(const StateField& u_n, const StateField& u_np1, const GridSpec& grid, double rho,
                            const SymmetricOperator& T);

/// System at the second time level (u^2 unknown), the benchmark problem.
[[nodiscard]] TimeLevelSystem build_second_level_system(const ProblemSpec& spec, const StepSolver& bootstrap_solver);

/// Owns two consecutive levels and advances them one step at a time.
class Stepper {
public:
    Stepper(ProblemSpec spec, StepSolver solver);
    /// Starts from given levels 0 and 1 instead of the bootstrap.
    Stepper(ProblemSpec spec, StepSolver solver, StateField u0, StateField u1);

    /// Computes the next level; throws SolverError if the solve does not converge.
    SolveReport advance();

    [[nodiscard]] const StateField& previous() const noexcept { return prev_; }
    [[nodiscard]] const StateField& current() const noexcept { return curr_; }
    [[nodiscard]] int level() const noexcept { return curr_.level; }
    [[nodiscard]] const ProblemSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const SymmetricOperator& toeplitz() const noexcept { return *T_; }
    /// Functionals over (previous, current).
    [[nodiscard]] double mass() const;
    [[nodiscard]] double energy() const;
    /// When false, advance() keeps non-converged solutions instead of throwing.
    void set_strict(bool strict) noexcept { strict_ = strict; }

private:
    ProblemSpec spec_;
    StepSolver solver_;
    std::shared_ptr<const SymmetricOperator> T_;
    Approximations approx_;
    StateField prev_;
    StateField curr_;
    bool strict_ = true;
};

/// Header values of the binary dump, in file order.
struct DumpHeader {
    double dim, M, N, alpha, rho, dt, h, level;
};

/// CSV with columns index,re,im.
void write_state_csv(const std::filesystem::path& path, const StateField& state);
/// Little-endian doubles: 8-value header then (re, im) pairs.
void write_state_binary(const std::filesystem::path& path, const StateField& state, const ProblemSpec& spec);
/// Reads a file written by write_state_binary.
[[nodiscard]] StateField read_state_binary(const std::filesystem::path& path, DumpHeader* header = nullptr);

}  // namespace rfnse
