// Acceptance runner: one PASS/FAIL line per criterion, details indented below it.
// Usage: rfnse_acceptance [criterion ...]   (no arguments runs everything)

#include "oracles.hpp"
#include "rfnse/analysis.hpp"
#include "rfnse/harness.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace rfnse;

namespace {

class Verdict {
public:
    void check(bool ok, const std::string& what)
    {
        ok_ = ok_ && ok;
        lines_.push_back(std::string(ok ? "    ok   " : "    MISS ") + what);
    }
    void note(const std::string& what) { lines_.push_back("         " + what); }
    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] const std::vector<std::string>& lines() const { return lines_; }

private:
    bool ok_ = true;
    std::vector<std::string> lines_;
};

template <typename... Args>
std::string fmt(const char* f, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ProblemSpec problem(const std::string& text) { return problem_from_config(RunConfig::parse(text)); }

TimeLevelSystem bench_system(const ProblemSpec& spec) { return build_second_level_system(spec, default_bootstrap_solver()); }

SolveOptions bench_options(int max_iter = 2000)
{
    SolveOptions o;
    o.tol = 1e-8;
    o.omega = 1.0;
    o.max_iter = max_iter;
    o.record_history = false;
    return o;
}

bool within(int got, double want, double tol) { return std::abs(got - want) <= tol; }

// ---------------------------------------------------------------------------

void table_1d(Verdict& v)
{
    const std::vector<std::size_t> sizes{6400, 12800, 25600, 51200, 102400};
    const std::map<std::size_t, double> gmres_12{{6400, 317}, {12800, 648}, {25600, 1375}};
    const std::map<std::size_t, double> circ_18{{6400, 11}, {25600, 14}};
    for (double alpha : {1.2, 1.4, 1.6, 1.8}) {
        int lo = 1 << 30, hi = 0;
        for (auto M : sizes) {
            const auto spec = problem(fmt("dim=1\nalpha=%g\nM=%zu\n", alpha, M));
            const auto sys = bench_system(spec);
            Approximations cache;
            const auto tau = run_method(sys, spec, MethodSpec::parse("tau-gmres"), bench_options(), false, &cache);
            lo = std::min(lo, tau.iterations);
            hi = std::max(hi, tau.iterations);
            const bool table_row = (alpha == 1.2 && M <= 25600) || (alpha == 1.8 && circ_18.count(M));
            if (!table_row) {
                v.note(fmt("alpha=%.1f M=%zu tau-gmres IT=%d", alpha, M, tau.iterations));
                continue;
            }
            v.check(within(tau.iterations, 6, 1), fmt("alpha=%.1f M=%zu tau-gmres IT=%d (6 +-1)", alpha, M, tau.iterations));
            const auto circ = run_method(sys, spec, MethodSpec::parse("c-gmres"), bench_options(), false, &cache);
            const double want_c = alpha == 1.2 ? 8.0 : circ_18.at(M);
            v.check(within(circ.iterations, want_c, 2),
                    fmt("alpha=%.1f M=%zu c-gmres IT=%d (%g +-2)", alpha, M, circ.iterations, want_c));
            if (alpha == 1.2) {
                const auto plain = run_method(sys, spec, MethodSpec::parse("gmres"), bench_options(), false, &cache);
                const double want = gmres_12.at(M);
                v.check(within(plain.iterations, want, 0.1 * want),
                        fmt("alpha=1.2 M=%zu gmres IT=%d (%g +-10%%) %s", M, plain.iterations, want, plain.status.c_str()));
            }
        }
        v.check(hi - lo <= 1, fmt("alpha=%.1f tau-gmres IT range over M=6400..102400: [%d, %d]", alpha, lo, hi));
    }
}

void table_2d(Verdict& v)
{
    const std::map<double, std::pair<double, double>> circ{{1.2, {12, 11}}, {1.4, {14, 15}}, {1.6, {19, 22}}, {1.8, {26, 34}}};
    for (const auto& [alpha, want] : circ) {
        for (int k : {32, 64}) {
            const auto spec = problem(fmt("dim=2\nalpha=%g\nh=1/%d\n", alpha, k));
            const auto sys = bench_system(spec);
            Approximations cache;
            const auto tau = run_method(sys, spec, MethodSpec::parse("tau-gmres"), bench_options(300), false, &cache);
            v.check(within(tau.iterations, 6, 1), fmt("alpha=%.1f h=1/%d tau-gmres IT=%d (6 +-1)", alpha, k, tau.iterations));
            const auto c = run_method(sys, spec, MethodSpec::parse("c-gmres"), bench_options(300), false, &cache);
            const double wc = k == 32 ? want.first : want.second;
            v.check(within(c.iterations, wc, 3), fmt("alpha=%.1f h=1/%d c-gmres IT=%d (%g +-3)", alpha, k, c.iterations, wc));
            if (alpha == 1.2 && k == 32) {
                const auto g = run_method(sys, spec, MethodSpec::parse("gmres"), bench_options(), false, &cache);
                v.check(within(g.iterations, 179, 17.9), fmt("alpha=1.2 h=1/32 gmres IT=%d (179 +-10%%)", g.iterations));
            }
        }
    }
}

void tban_theory(Verdict& v)
{
    std::vector<double> grid;
    for (double w = 0.5; w <= 3.0 + 1e-12; w += 0.05) grid.push_back(w);
    const double step = 0.05;
    struct Config {
        const char* time;
        bool desk;  // default time stepping: the minimizer must sit at w*
    };
    // The stressed configs push lambda_max above 1. There sigma only bounds the rate, and the
    // true-rate minimizer moves left of w*, so it is reported rather than checked.
    const Config configs[] = {{"", true}, {"N=20\nt_end=10\n", false}, {"N=10\nt_end=10\nrho=4\n", false}};
    for (double alpha : {1.2, 1.5, 1.8}) {
        for (const auto& c : configs) {
            for (int M : {16, 32, 64}) {
                const auto spec = problem(fmt("alpha=%g\nM=%d\n%s", alpha, M, c.time));
                const auto sys = bench_system(spec).block();
                const double l = sys.D.lambda_max;
                const double ws = optimal_omega(l);
                double worst = -1.0;
                for (double w : {0.5, 1.0, ws, 2.0}) {
                    const auto r = measure_tban_contraction(sys, w);
                    worst = std::max(worst, r.max_step - r.sigma);
                }
                double best_w = 0.0, best_rate = 1e300;
                for (double w : grid) {
                    const auto r = measure_tban_contraction(sys, w);
                    if (r.rate < best_rate) best_rate = r.rate, best_w = w;
                }
                const std::string tag = fmt("alpha=%.1f M=%d lambda_max=%.3f", alpha, M, l);
                v.check(worst <= 1e-8, tag + fmt(": max(step - sigma) over w in {0.5,1,w*,2} = %.2e", worst));
                const std::string where = tag + fmt(": measured minimizer %.2f, w* = %.4f", best_w, ws);
                if (c.desk)
                    v.check(std::abs(best_w - ws) <= step + 1e-12, where);
                else
                    v.note(where + " (stressed, bound only)");
            }
        }
    }
}

void brackets(Verdict& v)
{
    oracle::Rng rng(2024);
    int count = 0;
    double worst = 1e300;
    std::string worst_tag;
    for (int ai = 1; ai <= 9; ++ai) {
        const double alpha = 1.0 + 0.1 * ai;
        for (std::size_t M : {6, 8, 16, 32, 64}) {
            for (auto tag : {SpectrumTag::T1, SpectrumTag::tauT1, SpectrumTag::T2, SpectrumTag::tauT2}) {
                const bool two = tag == SpectrumTag::T2 || tag == SpectrumTag::tauT2;
                const double dt = rng.uniform(0.001, 1.0);
                const double L = rng.uniform(2.0, 60.0);
                try {
                    const auto r = check_bracket(tag, M, FractionalOrder(alpha), dt, -L / 2, L / 2, two && M > 16);
                    const double margin = std::min(r.lower_margin() / r.lower, r.upper_margin() / r.upper);
                    if (margin < worst) {
                        worst = margin;
                        worst_tag = fmt("%s alpha=%.1f M=%zu", std::string(to_string(tag)).c_str(), alpha, M);
                    }
                    ++count;
                } catch (const BracketViolation& e) {
                    v.check(false, e.what());
                }
            }
        }
    }
    v.check(worst > 0.0, fmt("%d configurations, smallest relative margin %.3e (%s)", count, worst, worst_tag.c_str()));
}

void sigma_circle(Verdict& v)
{
    struct Case {
        const char* text;
    };
    const Case cases[] = {
        {"dim=1\nalpha=1.2\nM=128\n"},   {"dim=1\nalpha=1.5\nM=128\nN=20\nt_end=10\n"},
        {"dim=1\nalpha=1.8\nM=128\nrho=8\n"}, {"dim=1\nalpha=1.5\nM=1024\n"},
        {"dim=2\nalpha=1.5\nM=8\n"},     {"dim=2\nalpha=1.8\nM=32\n"},
    };
    for (const auto& c : cases) {
        const auto spec = problem(c.text);
        const auto sys = bench_system(spec).block();
        const double l = sys.D.lambda_max;
        for (double w : {0.5, 1.0, optimal_omega(l), 2.0}) {
            const auto s = preconditioned_spectrum(sys, PrecondKind::exact, w);
            const auto st = cluster_stats(s.eigenvalues);
            const double sigma = sigma_bound(w, l);
            v.check(!s.ritz && st.radius100 <= sigma + 1e-8,
                    fmt("dim=%d M=%zu alpha=%.1f w=%.3f n=%zu: radius %.3e <= sigma %.3e", spec.grid.dim, spec.grid.M,
                        spec.alpha.value(), w, s.n, st.radius100, sigma));
        }
    }
}

void clustering(Verdict& v)
{
    SpectrumOptions opts;
    opts.dense_limit = 0;  // same Ritz path at both sizes
    for (double alpha : {1.1, 1.5, 1.9}) {
        double tau_r[2] = {0, 0};
        for (int i = 0; i < 2; ++i) {
            const std::size_t M = i == 0 ? 1600 : 3200;
            const auto spec = problem(fmt("dim=1\nalpha=%g\nM=%zu\nrho=2\n", alpha, M));
            const auto sys = bench_system(spec).block();
            const auto t = cluster_stats(preconditioned_spectrum(sys, PrecondKind::tau, 1.0, opts).eigenvalues);
            tau_r[i] = t.radius100;
            if (i == 0) {
                const auto c = cluster_stats(preconditioned_spectrum(sys, PrecondKind::circulant, 1.0, opts).eigenvalues);
                v.check(t.radius100 < c.radius100,
                        fmt("alpha=%.1f M=1600: tau radius %.4e < circulant radius %.4e (95%%: %.3e vs %.3e)", alpha,
                            t.radius100, c.radius100, t.radius95, c.radius95));
            }
        }
        const double change = std::abs(tau_r[1] - tau_r[0]) / tau_r[0];
        v.check(change <= 0.10, fmt("alpha=%.1f tau radius M=1600 -> 3200: %.4e -> %.4e (%.1f%%)", alpha, tau_r[0],
                                    tau_r[1], 100 * change));
    }
}

struct Drift {
    double mass = 0, energy = 0;
    long unconverged = 0;
};

Drift run_conservation(const ProblemSpec& spec)
{
    StepSolver solver;
    solver.options.tol = 1e-15;
    solver.options.max_iter = 100;
    solver.options.record_history = false;
    // tol = 1e-15 sits at round-off, so steps may end on maxiter. Level 1 is produced separately
    // because the bootstrap solve is always strict; Q and E are conserved for any level-1 data.
    StepSolver boot = default_bootstrap_solver();
    boot.options.tol = 1e-14;
    auto u0 = initial_condition(spec.grid);
    auto u1 = bootstrap_first_level(spec, u0, boot);
    Stepper st(spec, solver, std::move(u0), std::move(u1));
    st.set_strict(false);
    const double q0 = st.mass(), e0 = st.energy();
    Drift d;
    for (int n = 1; n < spec.grid.N; ++n) {
        if (!st.advance().converged) ++d.unconverged;
        d.mass = std::max(d.mass, std::abs(st.mass() - q0) / std::abs(q0));
        d.energy = std::max(d.energy, std::abs(st.energy() - e0) / std::abs(e0));
    }
    return d;
}

void conservation(Verdict& v)
{
    for (double alpha : {1.4, 1.7, 1.9, 2.0}) {
        const auto spec = problem(fmt("dim=1\nalpha=%g\nrho=2\nh=0.2\ndt=0.05\nt_end=4\n", alpha));
        const auto d = run_conservation(spec);
        v.check(d.mass <= 1e-12 && d.energy <= 1e-10,
                fmt("1D alpha=%.1f M=%zu N=%d: mass drift %.2e (<=1e-12), energy drift %.2e (<=1e-10)", alpha,
                    spec.grid.M, spec.grid.N, d.mass, d.energy));
    }
    for (double alpha : {1.2, 1.5, 1.8}) {
        const auto spec = problem(fmt("dim=2\nalpha=%g\nrho=1\nh=1/20\ndt=1/20\nt_end=5\n", alpha));
        const auto d = run_conservation(spec);
        v.check(d.mass <= 1e-10, fmt("2D alpha=%.1f M=%zu N=%d: mass drift %.2e (<=1e-10), energy drift %.2e", alpha,
                                     spec.grid.M, spec.grid.N, d.mass, d.energy));
    }
}

// Oracle equivalence on randomized small instances.
void oracle_suite(Verdict& v)
{
    constexpr int kTrials = 50;
    oracle::Rng rng(99);
    auto record = [&](const char* name, double worst, double tol) {
        v.check(worst <= tol, fmt("%-30s %d trials, worst %.2e (<= %.0e)", name, kTrials, worst, tol));
    };
    auto tmat = [](double a, double mu, int m) { return oracle::toeplitz(a, mu, m); };

    double w_t1 = 0, w_t2 = 0, w_tau1 = 0, w_tau2 = 0, w_c1 = 0, w_c2 = 0, w_ft = 0, w_fc = 0, w_fe = 0, w_dst = 0,
           w_dst2 = 0;
    for (int trial = 0; trial < kTrials; ++trial) {
        const double a = rng.uniform(1.05, 2.0);
        const double mu = rng.uniform(0.01, 30.0);
        const int m = rng.integer(2, 64);
        const int m2 = rng.integer(2, 12);
        const auto t1 = ToeplitzOp::make(FractionalOrder(a), mu, m);
        const auto t1s = ToeplitzOp::make(FractionalOrder(a), mu, m2);
        const auto t2 = std::make_shared<Toeplitz2Op>(t1s, t1s);
        const oracle::Mat T1 = tmat(a, mu, m), T1s = tmat(a, mu, m2);
        const auto x1 = rng.vec(m), x2 = rng.vec(m2 * m2);
        std::vector<double> y1(m), y2(m2 * m2);

        t1->apply(x1, y1);
        w_t1 = std::max(w_t1, oracle::rel_err(y1, T1 * oracle::to_eigen(x1)));
        t2->apply(x2, y2);
        w_t2 = std::max(w_t2, oracle::rel_err(y2, oracle::kron_sum(T1s, T1s) * oracle::to_eigen(x2)));

        const auto tau1 = make_tau(*t1);
        tau1->apply(x1, y1);
        w_tau1 = std::max(w_tau1, oracle::rel_err(y1, oracle::tau(T1) * oracle::to_eigen(x1)));
        const auto tau2 = make_tau(*t2);
        tau2->apply(x2, y2);
        const oracle::Mat tau1s = oracle::tau(T1s);
        w_tau2 = std::max(w_tau2, oracle::rel_err(y2, oracle::kron_sum(tau1s, tau1s) * oracle::to_eigen(x2)));

        const auto c1 = make_circulant(*t1);
        c1->apply(x1, y1);
        w_c1 = std::max(w_c1, oracle::rel_err(y1, oracle::strang(T1) * oracle::to_eigen(x1)));
        const auto c2 = make_circulant(*t2);
        c2->apply(x2, y2);
        const oracle::Mat c1s = oracle::strang(T1s);
        w_c2 = std::max(w_c2, oracle::rel_err(y2, oracle::kron_sum(c1s, c1s) * oracle::to_eigen(x2)));

        // Preconditioner inverses on a 1-level or 2-level instance.
        const bool two = trial % 2 == 1;
        const std::shared_ptr<const SymmetricOperator> T = two ? std::shared_ptr<const SymmetricOperator>(t2) : t1;
        const oracle::Mat Td = two ? oracle::kron_sum(T1s, T1s) : T1;
        const oracle::Mat Taud = two ? oracle::kron_sum(tau1s, tau1s) : oracle::tau(T1);
        const oracle::Mat Cd = two ? oracle::kron_sum(c1s, c1s) : oracle::strang(T1);
        const auto n = static_cast<std::size_t>(Td.rows());
        const auto d = rng.nonneg(n, rng.uniform(0.0, 3.0));
        const auto D = DiagonalBlock::from_entries(d);
        const double omega = rng.uniform(0.2, 3.0);
        const auto r = rng.vec(2 * n);
        std::vector<double> x(2 * n);
        TauPreconditioner(omega, two ? tau2 : tau1, D).apply_inverse(r, x);
        w_ft = std::max(w_ft, oracle::rel_err(x, oracle::block_F(omega, Taud, d).partialPivLu().solve(oracle::to_eigen(r))));
        CirculantPreconditioner(omega, two ? c2 : c1, D).apply_inverse(r, x);
        w_fc = std::max(w_fc, oracle::rel_err(x, oracle::block_F(omega, Cd, d).partialPivLu().solve(oracle::to_eigen(r))));
        ExactPreconditioner(omega, *T, D).apply_inverse(r, x);
        w_fe = std::max(w_fe, oracle::rel_err(x, oracle::block_F(omega, Td, d).partialPivLu().solve(oracle::to_eigen(r))));

        // Sine transform: involution and orthogonality, 1D and 2D.
        SineTransformPlan plan(m);
        const auto s = dst_apply(plan, x1);
        const auto ss = dst_apply(plan, s);
        w_dst = std::max({w_dst, oracle::rel_err(ss, oracle::to_eigen(x1)),
                          std::abs(oracle::to_eigen(s).norm() - oracle::to_eigen(x1).norm()) / oracle::to_eigen(x1).norm(),
                          oracle::rel_err(s, oracle::sine_matrix(m) * oracle::to_eigen(x1))});
        SineTransformPlan plan2(m2);
        const auto s2 = dst_apply_2d(plan2, x2);
        w_dst2 = std::max(w_dst2, oracle::rel_err(dst_apply_2d(plan2, s2), oracle::to_eigen(x2)));
    }
    record("Toeplitz apply (1-level)", w_t1, 1e-10);
    record("Toeplitz apply (2-level)", w_t2, 1e-10);
    record("tau apply (1-level)", w_tau1, 1e-10);
    record("tau apply (2-level)", w_tau2, 1e-10);
    record("circulant apply (1-level)", w_c1, 1e-10);
    record("circulant apply (2-level)", w_c2, 1e-10);
    record("tau preconditioner inverse", w_ft, 1e-10);
    record("circulant preconditioner inverse", w_fc, 1e-10);
    record("exact preconditioner inverse", w_fe, 1e-10);
    record("sine transform (1D)", w_dst, 1e-12);
    record("sine transform (2D)", w_dst2, 1e-12);

    // alpha = 2 pipeline against the tridiagonal stepper.
    double worst = 0.0;
    for (double rho : {0.0, 2.0}) {
        const auto spec = problem(fmt("dim=1\nalpha=2\nrho=%g\nM=127\nN=200\nt_end=2\n", rho));
        StepSolver solver;
        solver.options.tol = 1e-14;
        Stepper st(spec, solver);
        oracle::TridiagonalStepper ref(initial_condition(spec.grid).u, spec.grid.h(), spec.grid.dt(), rho);
        for (int n = 0; n <= 10; ++n) {
            for (std::size_t j = 0; j < ref.current().size(); ++j)
                worst = std::max(worst, std::abs(st.current().u[j] - ref.current()[j]));
            st.advance();
            ref.advance();
        }
    }
    v.check(worst <= 1e-8, fmt("%-30s 10 steps, max |difference| %.2e (<= 1e-8)", "alpha=2 vs tridiagonal stepper", worst));
}

void sweeps(Verdict& v)
{
    const auto base = bench_options();
    {
        const auto spec = problem("dim=1\nalpha=1.5\nM=1600\n");
        const std::vector<double> omegas{0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.9, 1.0, 1.05, 1.1, 1.15, 1.2, 1.3, 1.4, 1.5, 2, 3, 4};
        const auto rows = omega_sweep(spec, omegas, base);
        // Minimizer of IT, ties broken by the smaller final residual.
        const auto best = std::min_element(rows.begin(), rows.end(), [](const RunRecord& a, const RunRecord& b) {
            return std::pair(a.iterations, a.relres) < std::pair(b.iterations, b.relres);
        });
        auto it_at = [&](double w) {
            for (const auto& r : rows)
                if (std::abs(r.omega - w) < 1e-12) return r.iterations;
            return -1;
        };
        std::string trace;
        for (const auto& r : rows) trace += fmt("%g:%d ", r.omega, r.iterations);
        v.note("omega sweep (1D alpha=1.5 M=1600) " + trace);
        v.check(best->omega > 1.0 && best->omega <= 1.5, fmt("omega minimizer %.2f in (1, 1.5]", best->omega));
        v.check(it_at(0.05) > 3 * it_at(1.0), fmt("IT(0.05)=%d > 3 * IT(1)=%d", it_at(0.05), 3 * it_at(1.0)));
    }
    {
        const auto spec = problem("dim=1\nalpha=1.5\nM=1600\n");
        const std::vector<double> rhos{1, 2, 4, 8, 16, 32, 64};
        const std::vector<MethodSpec> methods{MethodSpec::parse("tau-gmres"), MethodSpec::parse("c-gmres"),
                                              MethodSpec::parse("gmres")};
        const auto rows = rho_sweep(spec, rhos, methods, base);
        auto it_at = [&](const std::string& m, double rho) {
            for (const auto& r : rows)
                if (r.method == m && r.rho == rho) return r.iterations;
            return -1;
        };
        for (const auto& m : {"tau-gmres", "c-gmres", "gmres"}) {
            std::string trace;
            for (double rho : rhos) trace += fmt("%g:%d ", rho, it_at(m, rho));
            v.note(std::string("rho sweep ") + m + ": " + trace);
        }
        v.check(it_at("tau-gmres", 64) <= 2 * it_at("tau-gmres", 1),
                fmt("tau-gmres IT(64)=%d <= 2 * IT(1)=%d", it_at("tau-gmres", 64), 2 * it_at("tau-gmres", 1)));
        v.check(it_at("gmres", 64) >= 2 * it_at("gmres", 1),
                fmt("gmres IT(64)=%d >= 2 * IT(1)=%d", it_at("gmres", 64), 2 * it_at("gmres", 1)));
    }
    {
        const auto spec = problem("dim=2\nrho=1\nh=1/8\ndt=1/20\n");
        std::vector<double> alphas;
        for (int i = 11; i <= 20; ++i) alphas.push_back(i / 10.0);
        const auto rows = alpha_sweep(spec, alphas, {MethodSpec::parse("tau-gmres")}, base);
        int lo = 1 << 30, hi = 0;
        std::string trace;
        for (const auto& r : rows) {
            lo = std::min(lo, r.iterations);
            hi = std::max(hi, r.iterations);
            trace += fmt("%.1f:%d ", r.alpha, r.iterations);
        }
        v.note("alpha sweep (2D h=1/8) tau-gmres " + trace);
        v.check(hi - lo <= 2, fmt("tau-gmres IT range %d..%d (spread <= 2)", lo, hi));
    }
}

struct Criterion {
    const char* name;
    const char* title;
    std::function<void(Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {"table_1d", "1D iteration tables", table_1d},
        {"table_2d", "2D iteration tables", table_2d},
        {"tban_theory", "TBAN contraction bound and optimal omega", tban_theory},
        {"brackets", "structured eigenvalue brackets", brackets},
        {"sigma_circle", "exact preconditioned spectrum in the sigma circle", sigma_circle},
        {"clustering", "tau vs circulant clustering", clustering},
        {"conservation", "discrete mass and energy conservation", conservation},
        {"oracle_suite", "fast operators vs dense oracles", oracle_suite},
        {"sweeps", "omega / rho / alpha sweep behaviour", sweeps},
    };
    std::vector<const Criterion*> selected;
    for (int i = 1; i < argc; ++i) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return argv[i] == std::string(c.name); });
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
            return 2;
        }
        selected.push_back(&*it);
    }
    if (selected.empty())
        for (const auto& c : all) selected.push_back(&c);

    int failed = 0;
    for (const auto* c : selected) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c->run(v);
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s: %s (%.1f s)\n", v.ok() ? "PASS" : "FAIL", c->name, c->title, secs);
        for (const auto& line : v.lines()) std::printf("%s\n", line.c_str());
        std::fflush(stdout);
        failed += v.ok() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
