/// @file analysis.hpp
/// @brief Spectral diagnostics and parameter sweeps.
///
/// - dense symmetric spectra and the closed-form eigenvalue brackets of
///   T, T_2, tau(T), tau(T_2);
/// - spectra of preconditioned block systems via Arnoldi (full dimension or Ritz);
/// - measured TBAN contraction against sigma(w);
/// - omega / rho / alpha sweeps over the second-time-level benchmark problem.
#pragma once

#include "rfnse/block_system.hpp"
#include "rfnse/scheme.hpp"
#include "rfnse/solvers.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rfnse {

/// Eigenvalues (ascending) of a column-major symmetric n x n matrix by cyclic
/// Jacobi rotations. Throws std::invalid_argument if asymmetric beyond 1e-12 relative
/// or n > kDenseLimit.
[[nodiscard]] std::vector<double> symmetric_eigs_dense(std::vector<double> a, std::size_t n);

enum class SpectrumTag { R, F_inv_R, Ftau_inv_R, FC_inv_R, T1, T2, tauT1, tauT2 };

[[nodiscard]] std::string_view to_string(SpectrumTag tag);
[[nodiscard]] SpectrumTag parse_spectrum_tag(std::string_view name);

/// Raised when a computed eigenvalue leaves its theoretical bracket.
class BracketViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BracketReport {
    SpectrumTag tag;
    std::size_t M;
    double lower, upper;
    double min_eig, max_eig;
    [[nodiscard]] double lower_margin() const noexcept { return min_eig - lower; }
    [[nodiscard]] double upper_margin() const noexcept { return upper - max_eig; }
};

/// Closed-form bracket for tag in {T1, T2, tauT1, tauT2} on [a,b] with M interior
/// points and time step dt.
[[nodiscard]] std::pair<double, double> eigen_bracket(SpectrumTag tag, std::size_t M, FractionalOrder alpha,
                                                      double dt, double a, double b);

/// Full spectrum of the tagged operator, checked against eigen_bracket. M must be
/// even and >= 4. 2-level operators are assembled densely when M*M <= kDenseLimit;
/// with kronecker = true their spectrum is taken as pairwise sums of the 1-level one.
[[nodiscard]] BracketReport check_bracket(SpectrumTag tag, std::size_t M, FractionalOrder alpha, double dt,
                                          double a, double b, bool kronecker = false);

/// Constants of the clustering estimates for the 2-level problem.
struct EigenBoundsParams {
    double theta;
    double theta0;
    int k0;
    double epsilon;
    double nu;  ///< max diagonal entry of D
    double alpha;
    double mu;
    double length;  ///< b - a

    /// epsilon must lie in (2^{2 alpha + 1} mu theta0 / M^alpha, 2 mu theta0];
    /// k0 = ceil((2 mu theta0 / epsilon)^{1/alpha}) + 1.
    static EigenBoundsParams make(FractionalOrder alpha, double mu, std::size_t M, double length, double nu,
                                  double epsilon);
};

struct ClusterStats {
    cplx center{1.0, 0.0};
    double radius95 = 0.0;   ///< radius about center containing 95% of the eigenvalues
    double radius100 = 0.0;  ///< radius containing all of them
    double min_real = 0.0;
    double max_real = 0.0;
};

[[nodiscard]] ClusterStats cluster_stats(const std::vector<cplx>& eigs, cplx center = {1.0, 0.0});

struct SpectrumSample {
    std::vector<cplx> eigenvalues;
    SpectrumTag tag = SpectrumTag::R;
    std::size_t n = 0;   ///< operator dimension (2 * unknowns)
    bool ritz = false;   ///< true if only Ritz values of a partial Arnoldi run
    int steps = 0;       ///< Arnoldi steps taken
};

struct SpectrumOptions {
    /// Arnoldi steps when the full dimension exceeds dense_limit.
    int ritz_steps = 200;
    std::size_t dense_limit = kDenseLimit;
    std::uint64_t seed = 20240611;
};

/// Eigenvalues of P^{-1} R (P = identity for PrecondKind::none) by Arnoldi with full
/// reorthogonalization. Runs to full dimension when 2n <= dense_limit, which
/// reproduces the whole spectrum; otherwise returns Ritz values.
[[nodiscard]] SpectrumSample preconditioned_spectrum(const BlockSystem& sys, PrecondKind kind, double omega,
                                                     const SpectrumOptions& opts = {});

struct ContractionReport {
    double rate = 0.0;      ///< geometric-mean error reduction over the measured tail
    double max_step = 0.0;  ///< largest single-step ratio in the (wI + 𝒟)-weighted norm
    double sigma = 0.0;     ///< sigma_bound(omega, lambda_max)
    int iterations = 0;
};

/// Power iteration on the TBAN error propagator (f = 0) from a fixed random start.
/// The error is measured in the norm ||(wI + 𝒟) e||, in which every step contracts
/// by at most sigma(w).
[[nodiscard]] ContractionReport measure_tban_contraction(const BlockSystem& sys, double omega, int iterations = 60,
                                                         std::uint64_t seed = 7);

// ---------------------------------------------------------------------------
// Benchmark runs and sweeps.

struct MethodSpec {
    Method method = Method::gmres;
    PrecondKind precond = PrecondKind::tau;

    /// tau-gmres | c-gmres | gmres | exact-gmres | tban
    [[nodiscard]] std::string name() const;
    static MethodSpec parse(std::string_view name);
};

/// One CSV row of the fixed benchmark schema.
struct RunRecord {
    std::string sweep;
    double value = 0.0;
    int dim = 1;
    std::size_t M = 0;
    std::size_t n = 0;  ///< unknowns, M^dim
    double alpha = 0.0;
    double rho = 0.0;
    double omega = 0.0;
    std::string method;
    int iterations = 0;
    double relres = 0.0;
    double wall_time = 0.0;
    std::string status;  ///< converged | maxiter | breakdown | oom
};

[[nodiscard]] std::string csv_header();
[[nodiscard]] std::string csv_row(const RunRecord& r);

/// Solves one time-level system; a tripped memory guard becomes status "oom".
/// With auto_omega the level's optimal omega replaces opts.omega.
[[nodiscard]] RunRecord run_method(const TimeLevelSystem& sys, const ProblemSpec& spec, MethodSpec method,
                                   SolveOptions opts, bool auto_omega = false, Approximations* cache = nullptr);

/// Bootstrap settings used to build the second-level benchmark system.
[[nodiscard]] StepSolver default_bootstrap_solver();

/// Runs fn(i) for i in [0, count) on up to `threads` worker threads. Exceptions are
/// rethrown after all workers finish (the first by index wins).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// tau-GMRES IT per omega on one problem.
[[nodiscard]] std::vector<RunRecord> omega_sweep(const ProblemSpec& spec, const std::vector<double>& omegas,
                                                 const SolveOptions& base, int threads = 1);
/// IT per rho for each listed method.
[[nodiscard]] std::vector<RunRecord> rho_sweep(const ProblemSpec& spec, const std::vector<double>& rhos,
                                               const std::vector<MethodSpec>& methods, const SolveOptions& base,
                                               int threads = 1);
/// IT per alpha for each listed method.
[[nodiscard]] std::vector<RunRecord> alpha_sweep(const ProblemSpec& spec, const std::vector<double>& alphas,
                                                 const std::vector<MethodSpec>& methods, const SolveOptions& base,
                                                 int threads = 1);

}  // namespace rfnse
