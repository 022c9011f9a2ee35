/// @file solvers.hpp
/// @brief Full GMRES with right preconditioning and the TBAN stationary iteration.
#pragma once

#include "rfnse/block_system.hpp"
#include "rfnse/preconditioners.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rfnse {

enum class PrecondKind { none, tau, circulant, exact };
enum class Method { gmres, tban };

[[nodiscard]] std::string_view to_string(PrecondKind kind);
[[nodiscard]] PrecondKind parse_precond(std::string_view name);
[[nodiscard]] std::string_view to_string(Method method);
[[nodiscard]] Method parse_method(std::string_view name);

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 2000;
    double omega = 1.0;
    PrecondKind precond = PrecondKind::tau;
    bool record_history = true;
    /// Bytes allowed for the Krylov basis, checked as (max_iter+1) * 2n doubles.
    std::size_t memory_budget = std::size_t{4} << 30;

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> residuals;  ///< relative residual per iteration, residuals[0] = 1
    double wall_time = 0.0;
    bool converged = false;
    double final_relres = 0.0;  ///< recomputed ||f - A x|| / ||f||
    std::string status;         ///< converged | maxiter | breakdown
    long inner_iterations = 0;  ///< TBAN: CG iterations over all half steps
    double inner_tol = 0.0;     ///< TBAN: relative tolerance of the inner CG
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

using LinearAction = std::function<void(std::span<const double>, std::span<double>)>;

/// Raised when a run would exceed the configured memory budget.
class ResourceGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on inner solver failures and divergence.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-restarted right-preconditioned GMRES from the zero initial guess, modified
/// Gram-Schmidt Arnoldi and Givens rotations. M_inv may be empty (no preconditioner).
/// Converged means the recomputed relative residual is <= opts.tol.
[[nodiscard]] SolveResult gmres(const LinearAction& A, const LinearAction& M_inv, std::span<const double> f,
                                const SolveOptions& opts);

/// One TBAN sweep:
///   (wI + 𝒯) x_half = (wI - 𝒟) x + f,   (wI + 𝒟) x_next = (wI - 𝒯) x_half + f.
/// The first half step is solved densely for n <= kDenseLimit, otherwise by CG on
/// (w^2 I + T^2) to inner_tol.
class TbanIteration {
public:
    TbanIteration(const BlockSystem& sys, double omega, double inner_tol);

    void step(std::span<const double> x, std::span<const double> f, std::span<double> out);
    [[nodiscard]] long inner_iterations() const noexcept { return inner_iterations_; }
    [[nodiscard]] bool dense() const noexcept { return dense_ != nullptr; }
    [[nodiscard]] double omega() const noexcept { return omega_; }

private:
    void solve_skew(std::span<const double> s, std::span<double> w);

    const BlockSystem* sys_;
    double omega_;
    double inner_tol_;
    std::unique_ptr<DenseSkewSolver> dense_;
    long inner_iterations_ = 0;
};

[[nodiscard]] SolveResult tban_solve(const BlockSystem& sys, const SolveOptions& opts);

/// sqrt(((w-1)^2 + l^2) / ((w+1)^2 + l^2)).
[[nodiscard]] double sigma_bound(double omega, double lambda_max);
/// w* = sqrt(l^2 + 1).
[[nodiscard]] double optimal_omega(double lambda_max);
/// sigma(w*) = l / (1 + sqrt(l^2 + 1)).
[[nodiscard]] double sigma_at_optimum(double lambda_max);

/// Lazily built structured approximations of a system's Toeplitz part.
struct Approximations {
    std::shared_ptr<const TauOp> tau;
    std::shared_ptr<const CirculantOp> circulant;
};

/// nullptr for PrecondKind::none.
[[nodiscard]] std::unique_ptr<BlockPreconditioner> make_preconditioner(const BlockSystem& sys, PrecondKind kind,
                                                                       double omega, Approximations* cache = nullptr);

/// Solve R x = f with the chosen method (GMRES uses opts.precond).
[[nodiscard]] SolveResult solve_block(const BlockSystem& sys, Method method, const SolveOptions& opts,
                                      Approximations* cache = nullptr);

}  // namespace rfnse
