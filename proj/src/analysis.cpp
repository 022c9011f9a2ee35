#include "rfnse/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace rfnse {

namespace {

double frobenius(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

bool two_level(SpectrumTag tag) { return tag == SpectrumTag::T2 || tag == SpectrumTag::tauT2; }

std::vector<double> kronecker_sum(const std::vector<double>& e)
{
    std::vector<double> out;
    out.reserve(e.size() * e.size());
    for (double x : e) {
        for (double y : e) out.push_back(x + y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string fmt(double v, const char* spec = "%.10g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> symmetric_eigs_dense(std::vector<double> a, std::size_t n)
{
    if (a.size() != n * n) throw std::invalid_argument("symmetric_eigs_dense: matrix is not n x n");
    if (n > kDenseLimit) throw std::invalid_argument("symmetric_eigs_dense: n exceeds the dense limit");
    const double fro = frobenius(a);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < n; ++i) {
            if (std::abs(a[i + j * n] - a[j + i * n]) > 1e-12 * std::max(fro, 1e-300)) {
                throw std::invalid_argument("symmetric_eigs_dense: matrix is not symmetric");
            }
        }
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i + j * n]; };

    int extra = 1;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = j + 1; i < n; ++i) off += 2.0 * at(i, j) * at(i, j);
        }
        if (std::sqrt(off) <= 1e-12 * fro) {
            if (extra-- == 0) break;
        }
        if (off == 0.0) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::string_view to_string(SpectrumTag tag)
{
    switch (tag) {
    case SpectrumTag::R: return "R";
    case SpectrumTag::F_inv_R: return "F_inv_R";
    case SpectrumTag::Ftau_inv_R: return "Ftau_inv_R";
    case SpectrumTag::FC_inv_R: return "FC_inv_R";
    case SpectrumTag::T1: return "T1";
    case SpectrumTag::T2: return "T2";
    case SpectrumTag::tauT1: return "tauT1";
    case SpectrumTag::tauT2: return "tauT2";
    }
    return "?";
}

SpectrumTag parse_spectrum_tag(std::string_view name)
{
    for (auto tag : {SpectrumTag::R, SpectrumTag::F_inv_R, SpectrumTag::Ftau_inv_R, SpectrumTag::FC_inv_R,
                     SpectrumTag::T1, SpectrumTag::T2, SpectrumTag::tauT1, SpectrumTag::tauT2}) {
        if (to_string(tag) == name) return tag;
    }
    throw std::invalid_argument("unknown operator tag '" + std::string(name) + "'");
}

std::pair<double, double> eigen_bracket(SpectrumTag tag, std::size_t M, FractionalOrder alpha, double dt, double a,
                                        double b)
{
    if (M < 4 || M % 2 != 0) throw std::invalid_argument("eigenvalue brackets need even M >= 4");
    const double al = alpha.value();
    const double L = b - a;
    const double h = L / static_cast<double>(M + 1);
    const double hal = std::pow(h, al);
    const auto coeffs = cached_coeffs(alpha, 2);
    const double c0 = (*coeffs)[0];
    const double c2 = (*coeffs)[2];
    const double theta = tail_constants(alpha).theta;
    const double levels = two_level(tag) ? 2.0 : 1.0;

    const double lower = 2.0 * levels * dt * theta / std::pow(L, al);
    double upper = 2.0 * levels * dt / hal * (c0 - theta * hal / std::pow(L, al));
    switch (tag) {
    case SpectrumTag::T1:
    case SpectrumTag::T2: break;
    case SpectrumTag::tauT1:
    case SpectrumTag::tauT2: upper -= levels * c2 * dt / hal; break;
    default: throw std::invalid_argument("eigen_bracket: tag must be T1, T2, tauT1 or tauT2");
    }
    return {lower, upper};
}

BracketReport check_bracket(SpectrumTag tag, std::size_t M, FractionalOrder alpha, double dt, double a, double b,
                            bool kronecker)
{
    const auto [lower, upper] = eigen_bracket(tag, M, alpha, dt, a, b);
    const double h = (b - a) / static_cast<double>(M + 1);
    const double mu = dt / std::pow(h, alpha.value());
    const auto T = ToeplitzOp::make(alpha, mu, M);

    std::vector<double> eig;
    const bool tau = tag == SpectrumTag::tauT1 || tag == SpectrumTag::tauT2;
    if (!two_level(tag) || kronecker) {
        std::vector<double> dense = tau ? tau_from_toeplitz(*T).dense() : T->dense();
        eig = symmetric_eigs_dense(std::move(dense), M);
        if (two_level(tag)) eig = kronecker_sum(eig);
    } else {
        if (M * M > kDenseLimit) throw std::invalid_argument("check_bracket: 2-level size exceeds the dense limit");
        const Toeplitz2Op T2(T, T);
        std::vector<double> dense = tau ? tau2_from_toeplitz(T2).dense() : T2.dense();
        eig = symmetric_eigs_dense(std::move(dense), M * M);
    }

    BracketReport rep{tag, M, lower, upper, eig.front(), eig.back()};
    if (!(rep.min_eig > lower) || !(rep.max_eig < upper)) {
        throw BracketViolation(std::string(to_string(tag)) + " M=" + std::to_string(M) + " alpha=" +
                               fmt(alpha.value()) + ": spectrum [" + fmt(rep.min_eig, "%.17g") + ", " +
                               fmt(rep.max_eig, "%.17g") + "] leaves bracket (" + fmt(lower, "%.17g") + ", " +
                               fmt(upper, "%.17g") + ")");
    }
    return rep;
}

EigenBoundsParams EigenBoundsParams::make(FractionalOrder alpha, double mu, std::size_t M, double length, double nu,
                                          double epsilon)
{
    const auto tc = tail_constants(alpha);
    const double al = alpha.value();
    const double lo = std::pow(2.0, 2.0 * al + 1.0) * mu * tc.theta0 / std::pow(static_cast<double>(M), al);
    const double hi = 2.0 * mu * tc.theta0;
    if (!(epsilon > lo && epsilon <= hi)) {
        throw std::invalid_argument("epsilon must lie in (" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    const int k0 = static_cast<int>(std::ceil(std::pow(2.0 * mu * tc.theta0 / epsilon, 1.0 / al))) + 1;
    return {tc.theta, tc.theta0, k0, epsilon, nu, al, mu, length};
}

ClusterStats cluster_stats(const std::vector<cplx>& eigs, cplx center)
{
    ClusterStats s;
    s.center = center;
    if (eigs.empty()) return s;
    std::vector<double> d;
    d.reserve(eigs.size());
    s.min_real = eigs.front().real();
    s.max_real = eigs.front().real();
    for (const cplx& z : eigs) {
        d.push_back(std::abs(z - center));
        s.min_real = std::min(s.min_real, z.real());
        s.max_real = std::max(s.max_real, z.real());
    }
    std::sort(d.begin(), d.end());
    s.radius100 = d.back();
    const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(d.size())));
    s.radius95 = d[std::max<std::size_t>(k, 1) - 1];
    return s;
}

// ---------------------------------------------------------------------------

SpectrumSample preconditioned_spectrum(const BlockSystem& sys, PrecondKind kind, double omega,
                                       const SpectrumOptions& opts)
{
    const std::size_t N = 2 * sys.half();
    const auto P = make_preconditioner(sys, kind, omega);
    const bool full = N <= opts.dense_limit;
    const auto k = static_cast<Eigen::Index>(full ? N : std::min<std::size_t>(N, static_cast<std::size_t>(opts.ritz_steps)));
    if (k < 1) throw std::invalid_argument("preconditioned_spectrum: need at least one Arnoldi step");

    std::vector<double> tmp(N), out(N);
    auto op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        std::span<const double> xs(x.data(), N);
        if (P) {
            apply_R(sys, xs, tmp);
            P->apply_inverse(tmp, out);
        } else {
            apply_R(sys, xs, out);
        }
        y = Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(N));
    };

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        Eigen::VectorXd v(static_cast<Eigen::Index>(N));
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
        return v;
    };

    const auto Nn = static_cast<Eigen::Index>(N);
    Eigen::MatrixXd V(Nn, k + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k + 1, k);
    Eigen::VectorXd v = random_vector();
    V.col(0) = v / v.norm();
    Eigen::VectorXd w;
    int steps = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
        op(V.col(j), w);
        const double wn0 = w.norm();
        // Classical Gram-Schmidt, applied twice.
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd hc = V.leftCols(j + 1).transpose() * w;
            w.noalias() -= V.leftCols(j + 1) * hc;
            H.col(j).head(j + 1) += hc;
        }
        ++steps;
        const double hn = w.norm();
        H(j + 1, j) = hn;
        if (j + 1 == k) break;
        if (hn <= 1e-10 * std::max(wn0, 1e-300)) {
            // Invariant subspace: continue from a fresh direction so the full-dimension
            // run still spans the whole space.
            H(j + 1, j) = 0.0;
            w = random_vector();
            for (int pass = 0; pass < 2; ++pass) {
                w.noalias() -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            }
            V.col(j + 1) = w / w.norm();
        } else {
            V.col(j + 1) = w / hn;
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(k, k), false);
    if (es.info() != Eigen::Success) throw std::runtime_error("preconditioned_spectrum: Hessenberg eigensolve failed");

    SpectrumSample sample;
    switch (kind) {
    case PrecondKind::none: sample.tag = SpectrumTag::R; break;
    case PrecondKind::tau: sample.tag = SpectrumTag::Ftau_inv_R; break;
    case PrecondKind::circulant: sample.tag = SpectrumTag::FC_inv_R; break;
    case PrecondKind::exact: sample.tag = SpectrumTag::F_inv_R; break;
    }
    sample.n = N;
    sample.ritz = static_cast<std::size_t>(k) < N;
    sample.steps = steps;
    const auto& ev = es.eigenvalues();
    sample.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end(), [](cplx x, cplx y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
    });
    return sample;
}

ContractionReport measure_tban_contraction(const BlockSystem& sys, double omega, int iterations, std::uint64_t seed)
{
    if (iterations < 2) throw std::invalid_argument("measure_tban_contraction: need at least 2 iterations");
    const std::size_t N = 2 * sys.half();
    TbanIteration iter(sys, omega, 1e-14);
    std::vector<double> e(N), next(N), zero(N, 0.0), De(N);

    auto weighted_norm = [&](const std::vector<double>& x) {
        apply_D_block(sys, x, De);
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double v = omega * x[i] + De[i];
            s += v * v;
        }
        return std::sqrt(s);
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (double& v : e) v = gauss(rng);
    double ne = weighted_norm(e);
    for (double& v : e) v /= ne;

    ContractionReport rep;
    rep.sigma = sigma_bound(omega, sys.D.lambda_max);
    double log_sum = 0.0;
    int counted = 0;
    const int tail_start = iterations / 2;
    for (int k = 0; k < iterations; ++k) {
        iter.step(e, zero, next);
        const double nn = weighted_norm(next);
        rep.iterations = k + 1;
        if (nn == 0.0) {
            rep.rate = 0.0;
            return rep;
        }
        rep.max_step = std::max(rep.max_step, nn);
        if (k >= tail_start) {
            log_sum += std::log(nn);
            ++counted;
        }
        for (std::size_t i = 0; i < N; ++i) e[i] = next[i] / nn;
    }
    rep.rate = std::exp(log_sum / counted);
    return rep;
}

// ---------------------------------------------------------------------------

std::string MethodSpec::name() const
{
    if (method == Method::tban) return "tban";
    switch (precond) {
    case PrecondKind::none: return "gmres";
    case PrecondKind::tau: return "tau-gmres";
    case PrecondKind::circulant: return "c-gmres";
    case PrecondKind::exact: return "exact-gmres";
    }
    return "?";
}

MethodSpec MethodSpec::parse(std::string_view name)
{
    if (name == "tban") return {Method::tban, PrecondKind::none};
    if (name == "gmres") return {Method::gmres, PrecondKind::none};
    if (name == "tau-gmres") return {Method::gmres, PrecondKind::tau};
    if (name == "c-gmres") return {Method::gmres, PrecondKind::circulant};
    if (name == "exact-gmres") return {Method::gmres, PrecondKind::exact};
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string csv_header() { return "sweep,value,dim,M,n,alpha,rho,omega,method,IT,relres,wall_time,status"; }

std::string csv_row(const RunRecord& r)
{
    std::string s;
    s += r.sweep + ',' + fmt(r.value) + ',' + std::to_string(r.dim) + ',' + std::to_string(r.M) + ',' +
         std::to_string(r.n) + ',' + fmt(r.alpha) + ',' + fmt(r.rho) + ',' + fmt(r.omega) + ',' + r.method + ',' +
         std::to_string(r.iterations) + ',' + fmt(r.relres, "%.6e") + ',' + fmt(r.wall_time, "%.6f") + ',' +
         r.status;
    return s;
}

RunRecord run_method(const TimeLevelSystem& sys, const ProblemSpec& spec, MethodSpec method, SolveOptions opts,
                     bool auto_omega, Approximations* cache)
{
    RunRecord r;
    r.dim = spec.grid.dim;
    r.M = spec.grid.M;
    r.n = spec.grid.unknowns();
    r.alpha = spec.alpha.value();
    r.rho = spec.rho;
    r.method = method.name();
    if (auto_omega) opts.omega = sys.omega_hint;
    opts.precond = method.precond;
    opts.record_history = false;
    r.omega = opts.omega;
    try {
        const auto block = sys.block();
        const auto res = solve_block(block, method.method, opts, cache);
        r.iterations = res.report.iterations;
        r.relres = res.report.final_relres;
        r.wall_time = res.report.wall_time;
        r.status = res.report.status;
    } catch (const ResourceGuardError&) {
        r.status = "oom";
        r.relres = std::nan("");
    }
    return r;
}

StepSolver default_bootstrap_solver()
{
    StepSolver s;
    s.method = Method::gmres;
    s.options.precond = PrecondKind::tau;
    s.options.tol = 1e-10;
    s.options.max_iter = 500;
    s.options.record_history = false;
    return s;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    std::vector<std::exception_ptr> errors(count);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(workers, count); ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<RunRecord> omega_sweep(const ProblemSpec& spec, const std::vector<double>& omegas,
                                   const SolveOptions& base, int threads)
{
    if (omegas.empty()) throw std::invalid_argument("omega sweep: empty list");
    const auto sys = build_second_level_system(spec, default_bootstrap_solver());
    Approximations cache;
    cache.tau = make_tau(*sys.T);
    std::vector<RunRecord> rows(omegas.size());
    parallel_for(omegas.size(), threads, [&](std::size_t i) {
        SolveOptions opts = base;
        opts.omega = omegas[i];
        Approximations local = cache;
        rows[i] = run_method(sys, spec, {Method::gmres, PrecondKind::tau}, opts, false, &local);
        rows[i].sweep = "omega";
        rows[i].value = omegas[i];
    });
    return rows;
}

namespace {

std::vector<RunRecord> problem_sweep(const std::string& name, const std::vector<ProblemSpec>& specs,
                                     const std::vector<double>& values, const std::vector<MethodSpec>& methods,
                                     const SolveOptions& base, int threads)
{
    if (values.empty()) throw std::invalid_argument(name + " sweep: empty list");
    if (methods.empty()) throw std::invalid_argument(name + " sweep: no methods");
    std::vector<RunRecord> rows(values.size() * methods.size());
    parallel_for(values.size(), threads, [&](std::size_t i) {
        const auto sys = build_second_level_system(specs[i], default_bootstrap_solver());
        Approximations cache;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            auto& row = rows[i * methods.size() + m];
            row = run_method(sys, specs[i], methods[m], base, false, &cache);
            row.sweep = name;
            row.value = values[i];
        }
    });
    return rows;
}

}  // namespace

std::vector<RunRecord> rho_sweep(const ProblemSpec& spec, const std::vector<double>& rhos,
                                 const std::vector<MethodSpec>& methods, const SolveOptions& base, int threads)
{
    std::vector<ProblemSpec> specs;
    for (double r : rhos) {
        ProblemSpec s = spec;
        s.rho = r;
        s.validate();
        specs.push_back(s);
    }
    return problem_sweep("rho", specs, rhos, methods, base, threads);
}

std::vector<RunRecord> alpha_sweep(const ProblemSpec& spec, const std::vector<double>& alphas,
                                   const std::vector<MethodSpec>& methods, const SolveOptions& base, int threads)
{
    std::vector<ProblemSpec> specs;
    for (double a : alphas) {
        ProblemSpec s = spec;
        s.alpha = FractionalOrder(a);
        specs.push_back(s);
    }
    return problem_sweep("alpha", specs, alphas, methods, base, threads);
}

}  // namespace rfnse
