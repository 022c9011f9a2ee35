#include "rfnse/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace rfnse {

namespace {

using Clock = std::chrono::steady_clock;

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(PrecondKind kind)
{
    switch (kind) {
    case PrecondKind::none: return "none";
    case PrecondKind::tau: return "tau";
    case PrecondKind::circulant: return "circulant";
    case PrecondKind::exact: return "exact";
    }
    return "?";
}

PrecondKind parse_precond(std::string_view name)
{
    if (name == "none") return PrecondKind::none;
    if (name == "tau") return PrecondKind::tau;
    if (name == "circulant") return PrecondKind::circulant;
    if (name == "exact") return PrecondKind::exact;
    throw std::invalid_argument("unknown preconditioner '" + std::string(name) + "'");
}

std::string_view to_string(Method method) { return method == Method::gmres ? "gmres" : "tban"; }

Method parse_method(std::string_view name)
{
    if (name == "gmres") return Method::gmres;
    if (name == "tban") return Method::tban;
    throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

void SolveOptions::validate() const
{
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
}

// ---------------------------------------------------------------------------

SolveResult gmres(const LinearAction& A, const LinearAction& M_inv, std::span<const double> f, const SolveOptions& opts)
{
    opts.validate();
    const auto t0 = Clock::now();
    const std::size_t n = f.size();
    const auto m = static_cast<std::size_t>(opts.max_iter);

    const double basis_bytes = static_cast<double>(m + 1) * static_cast<double>(n) * sizeof(double);
    if (basis_bytes > static_cast<double>(opts.memory_budget)) {
        throw ResourceGuardError("GMRES basis needs " + std::to_string(basis_bytes / (1 << 20)) +
                                 " MiB, budget is " + std::to_string(opts.memory_budget >> 20) + " MiB");
    }

    SolveResult result;
    result.x.assign(n, 0.0);
    auto& rep = result.report;
    const double beta = norm2(f);
    if (opts.record_history) rep.residuals.push_back(1.0);
    if (beta == 0.0) {
        rep.converged = true;
        rep.status = "converged";
        rep.wall_time = seconds_since(t0);
        return result;
    }

    std::vector<std::vector<double>> V;
    V.reserve(std::min<std::size_t>(m + 1, 256));
    V.emplace_back(f.begin(), f.end());
    for (double& v : V[0]) v /= beta;

    std::vector<std::vector<double>> H;  // column k has k+2 entries after rotation
    std::vector<double> cs, sn, g{beta};
    std::vector<double> z(n), w(n), r(n), acc(n);

    auto precondition = [&](std::span<const double> v, std::span<double> out) {
        if (M_inv) {
            M_inv(v, out);
        } else {
            std::copy(v.begin(), v.end(), out.begin());
        }
    };

    // x = M^{-1} V_k y_k with y_k from the triangular least-squares system.
    auto form_solution = [&](std::size_t k) {
        std::vector<double> y(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t i = k; i-- > 0;) {
            for (std::size_t j = i + 1; j < k; ++j) y[i] -= H[j][i] * y[j];
            y[i] /= H[i][i];
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            const double c = y[j];
            const auto& vj = V[j];
            for (std::size_t i = 0; i < n; ++i) acc[i] += c * vj[i];
        }
        precondition(acc, result.x);
        A(result.x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - r[i];
        return norm2(r) / beta;
    };

    rep.status = "maxiter";
    for (std::size_t k = 0; k < m; ++k) {
        precondition(V[k], z);
        A(z, w);

        std::vector<double> h(k + 2, 0.0);
        for (std::size_t j = 0; j <= k; ++j) {
            h[j] = dot(w, V[j]);
            const auto& vj = V[j];
            for (std::size_t i = 0; i < n; ++i) w[i] -= h[j] * vj[i];
        }
        const double hnext = norm2(w);
        h[k + 1] = hnext;
        double colnorm = 0.0;
        for (double v : h) colnorm = std::hypot(colnorm, v);

        for (std::size_t j = 0; j < k; ++j) {
            const double a = h[j];
            const double b = h[j + 1];
            h[j] = cs[j] * a + sn[j] * b;
            h[j + 1] = -sn[j] * a + cs[j] * b;
        }
        const double rr = std::hypot(h[k], h[k + 1]);
        const double c = rr == 0.0 ? 1.0 : h[k] / rr;
        const double s = rr == 0.0 ? 0.0 : h[k + 1] / rr;
        cs.push_back(c);
        sn.push_back(s);
        h[k] = rr;
        h[k + 1] = 0.0;
        g.push_back(-s * g[k]);
        g[k] = c * g[k];
        H.push_back(std::move(h));

        const double est = std::abs(g[k + 1]) / beta;
        rep.iterations = static_cast<int>(k + 1);
        if (opts.record_history) rep.residuals.push_back(est);

        const bool breakdown = hnext <= 1e-14 * colnorm;
        const bool last = k + 1 == m;
        if (est <= opts.tol || breakdown || last) {
            if (rr == 0.0) {
                throw SolverError("GMRES: singular Hessenberg matrix at step " + std::to_string(k + 1));
            }
            rep.final_relres = form_solution(k + 1);
            if (rep.final_relres <= opts.tol) {
                rep.converged = true;
                rep.status = "converged";
                break;
            }
            if (breakdown) {
                rep.status = "breakdown";
                break;
            }
            if (last) break;
        }
        V.emplace_back(w.begin(), w.end());
        for (double& v : V.back()) v /= hnext;
    }
    rep.wall_time = seconds_since(t0);
    return result;
}

// ---------------------------------------------------------------------------

TbanIteration::TbanIteration(const BlockSystem& sys, double omega, double inner_tol)
    : sys_(&sys), omega_(omega), inner_tol_(inner_tol)
{
    if (!(omega > 0.0)) throw std::invalid_argument("TBAN: omega must be positive");
    if (!sys.T || sys.T->size() != sys.half()) throw std::invalid_argument("TBAN: inconsistent block system");
    if (sys.half() <= kDenseLimit) {
        dense_ = std::make_unique<DenseSkewSolver>(omega, *sys.T);
    }
}

void TbanIteration::solve_skew(std::span<const double> s, std::span<double> w)
{
    if (dense_) {
        dense_->solve(s, w);
        return;
    }
    const std::size_t n = sys_->half();
    const auto& T = *sys_->T;
    const double om = omega_;
    auto sz = s.subspan(0, n);
    auto sy = s.subspan(n, n);
    std::vector<double> rhs(n), tmp(n), tmp2(n);
    T.apply(sz, tmp);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = om * sy[i] + tmp[i];

    // CG on (w^2 I + T^2) v = rhs, zero initial guess.
    std::vector<double> v(n, 0.0), r = rhs, p = rhs, q(n);
    const double rn0 = norm2(rhs);
    double rr = dot(r, r);
    const int max_inner = 10 * static_cast<int>(n) + 100;
    int it = 0;
    while (std::sqrt(rr) > inner_tol_ * rn0 && it < max_inner) {
        T.apply(p, tmp);
        T.apply(tmp, q);
        for (std::size_t i = 0; i < n; ++i) q[i] += om * om * p[i];
        const double pq = dot(p, q);
        if (!(pq > 0.0)) throw SolverError("TBAN inner CG: loss of positive definiteness");
        const double a = rr / pq;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += a * p[i];
            r[i] -= a * q[i];
        }
        const double rr_new = dot(r, r);
        const double b = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + b * p[i];
        ++it;
    }
    inner_iterations_ += it;
    if (std::sqrt(rr) > inner_tol_ * rn0) {
        throw SolverError("TBAN inner CG did not reach tolerance in " + std::to_string(max_inner) + " steps");
    }
    T.apply(v, tmp2);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (sz[i] - tmp2[i]) / om;
        w[n + i] = v[i];
    }
}

void TbanIteration::step(std::span<const double> x, std::span<const double> f, std::span<double> out)
{
    const std::size_t n2 = 2 * sys_->half();
    std::vector<double> rhs(n2), half(n2), t(n2);
    apply_D_block(*sys_, x, t);
    for (std::size_t i = 0; i < n2; ++i) rhs[i] = omega_ * x[i] - t[i] + f[i];
    solve_skew(rhs, half);

    apply_T_block(*sys_, half, t);
    for (std::size_t i = 0; i < n2; ++i) rhs[i] = omega_ * half[i] - t[i] + f[i];
    // (wI + 𝒟) = [[(w+1)I, -D], [D, (w+1)I]], solved entrywise.
    solve_diagonal_stage(omega_, sys_->D, rhs, out);
}

SolveResult tban_solve(const BlockSystem& sys, const SolveOptions& opts)
{
    opts.validate();
    const auto t0 = Clock::now();
    const std::size_t n2 = 2 * sys.half();
    const auto f = sys.f.values();
    if (f.size() != n2) throw std::invalid_argument("TBAN: right-hand side size mismatch");

    SolveResult result;
    result.x.assign(n2, 0.0);
    auto& rep = result.report;
    rep.inner_tol = 1e-2 * opts.tol;
    if (opts.record_history) rep.residuals.push_back(1.0);
    const double beta = norm2(f);
    if (beta == 0.0) {
        rep.converged = true;
        rep.status = "converged";
        rep.wall_time = seconds_since(t0);
        return result;
    }

    TbanIteration iter(sys, opts.omega, rep.inner_tol);
    std::vector<double> next(n2), res(n2);
    double best = 1.0;
    rep.status = "maxiter";
    for (int k = 0; k < opts.max_iter; ++k) {
        iter.step(result.x, f, next);
        result.x.swap(next);
        apply_R(sys, result.x, res);
        for (std::size_t i = 0; i < n2; ++i) res[i] = f[i] - res[i];
        const double rel = norm2(res) / beta;
        rep.iterations = k + 1;
        rep.final_relres = rel;
        if (opts.record_history) rep.residuals.push_back(rel);
        if (!std::isfinite(rel) || rel > 10.0 * best) {
            rep.inner_iterations = iter.inner_iterations();
            throw SolverError("TBAN diverged: residual " + std::to_string(rel) + " exceeds 10x best " +
                              std::to_string(best));
        }
        best = std::min(best, rel);
        if (rel <= opts.tol) {
            rep.converged = true;
            rep.status = "converged";
            break;
        }
    }
    rep.inner_iterations = iter.inner_iterations();
    rep.wall_time = seconds_since(t0);
    return result;
}

// ---------------------------------------------------------------------------

double sigma_bound(double omega, double lambda_max)
{
    if (!(omega > 0.0) || !(lambda_max >= 0.0)) {
        throw std::invalid_argument("sigma_bound needs omega > 0 and lambda_max >= 0");
    }
    const double l2 = lambda_max * lambda_max;
    return std::sqrt(((omega - 1.0) * (omega - 1.0) + l2) / ((omega + 1.0) * (omega + 1.0) + l2));
}

double optimal_omega(double lambda_max)
{
    if (!(lambda_max >= 0.0)) throw std::invalid_argument("optimal_omega needs lambda_max >= 0");
    return std::sqrt(lambda_max * lambda_max + 1.0);
}

double sigma_at_optimum(double lambda_max) { return lambda_max / (1.0 + optimal_omega(lambda_max)); }

// ---------------------------------------------------------------------------

std::unique_ptr<BlockPreconditioner> make_preconditioner(const BlockSystem& sys, PrecondKind kind, double omega,
                                                         Approximations* cache)
{
    Approximations local;
    Approximations& ap = cache ? *cache : local;
    switch (kind) {
    case PrecondKind::none: return nullptr;
    case PrecondKind::tau:
        if (!ap.tau) ap.tau = make_tau(*sys.T);
        return std::make_unique<TauPreconditioner>(omega, ap.tau, sys.D);
    case PrecondKind::circulant:
        if (!ap.circulant) ap.circulant = make_circulant(*sys.T);
        return std::make_unique<CirculantPreconditioner>(omega, ap.circulant, sys.D);
    case PrecondKind::exact: return std::make_unique<ExactPreconditioner>(omega, *sys.T, sys.D);
    }
    return nullptr;
}

SolveResult solve_block(const BlockSystem& sys, Method method, const SolveOptions& opts, Approximations* cache)
{
    if (method == Method::tban) return tban_solve(sys, opts);

    // Construction of the preconditioner is counted in the wall time.
    const auto t0 = Clock::now();
    const auto P = make_preconditioner(sys, opts.precond, opts.omega, cache);
    LinearAction A = [&sys](std::span<const double> x, std::span<double> y) { apply_R(sys, x, y); };
    LinearAction Minv;
    if (P) {
        Minv = [&P](std::span<const double> r, std::span<double> x) { P->apply_inverse(r, x); };
    }
    const double setup = seconds_since(t0);
    auto result = gmres(A, Minv, sys.f.values(), opts);
    result.report.wall_time += setup;
    return result;
}

}  // namespace rfnse
