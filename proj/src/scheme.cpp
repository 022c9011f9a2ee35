#include "rfnse/scheme.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rfnse {

namespace {

void require_same_size(const StateField& a, const StateField& b)
{
    if (a.u.size() != b.u.size()) {
        throw std::invalid_argument("state fields of different sizes: " + std::to_string(a.u.size()) + " vs " +
                                    std::to_string(b.u.size()));
    }
}

double cell_volume(const GridSpec& grid) { return grid.dim == 1 ? grid.h() : grid.h() * grid.h(); }

double quadratic_form(const SymmetricOperator& T, const std::vector<cplx>& u)
{
    std::vector<cplx> Tu(u.size());
    T.apply_complex(u, Tu);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += (std::conj(u[i]) * Tu[i]).real();
    }
    return s;
}

std::vector<cplx> solve_complex(std::shared_ptr<const SymmetricOperator> T, DiagonalBlock D,
                                const std::vector<cplx>& rhs, const StepSolver& solver, Approximations* cache,
                                SolveReport* report, bool strict)
{
    const auto opts = solver.resolve(D);
    const auto sys = make_block_system(std::move(T), std::move(D), rhs);
    auto res = solve_block(sys, solver.method, opts, cache);
    if (strict && !res.report.converged) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", res.report.final_relres);
        throw SolverError("time-level solve stopped with status '" + res.report.status + "' at relative residual " +
                          buf);
    }
    if (report) *report = res.report;
    return lift(BlockVector(std::move(res.x)));
}

void put_le(std::ofstream& out, double v)
{
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::ifstream& in)
{
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw std::runtime_error("truncated state dump");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

}  // namespace

std::vector<double> GridSpec::nodes() const
{
    std::vector<double> x(M);
    const double step = h();
    for (std::size_t j = 0; j < M; ++j) {
        x[j] = a + static_cast<double>(j + 1) * step;
    }
    return x;
}

void GridSpec::validate() const
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (!(b > a)) throw std::invalid_argument("domain needs b > a");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
}

void ProblemSpec::validate() const
{
    grid.validate();
    if (!(rho >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
}

SolveOptions StepSolver::resolve(const DiagonalBlock& D) const
{
    SolveOptions opts = options;
    if (auto_omega) opts.omega = optimal_omega(D.lambda_max);
    return opts;
}

StateField initial_condition_1d(const GridSpec& grid)
{
    if (grid.dim != 1) throw std::invalid_argument("initial_condition_1d needs a 1D grid");
    StateField s;
    for (double x : grid.nodes()) {
        s.u.push_back(std::polar(1.0 / std::cosh(x), 2.0 * x));
    }
    return s;
}

StateField initial_condition_2d(const GridSpec& grid)
{
    if (grid.dim != 2) throw std::invalid_argument("initial_condition_2d needs a 2D grid");
    const auto x = grid.nodes();
    const double amp = 2.0 / std::sqrt(std::numbers::pi);
    StateField s;
    s.u.resize(grid.M * grid.M);
    for (std::size_t k = 0; k < grid.M; ++k) {
        for (std::size_t j = 0; j < grid.M; ++j) {
            s.u[j + k * grid.M] = amp * std::exp(-(x[j] * x[j] + x[k] * x[k]));
        }
    }
    return s;
}

StateField initial_condition(const GridSpec& grid)
{
    return grid.dim == 1 ? initial_condition_1d(grid) : initial_condition_2d(grid);
}

DiagonalBlock diagonal_from_state(const StateField& u, double rho, double dt)
{
    if (!(rho >= 0.0)) throw std::invalid_argument("diagonal_from_state needs rho >= 0");
    std::vector<double> d(u.u.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = rho * dt * std::norm(u.u[i]);
    }
    return DiagonalBlock::from_entries(std::move(d));
}

std::shared_ptr<const SymmetricOperator> make_toeplitz(const GridSpec& grid, FractionalOrder alpha, double scale)
{
    grid.validate();
    const double mu = scale * grid.dt() / std::pow(grid.h(), alpha.value());
    auto tx = ToeplitzOp::make(alpha, mu, grid.M);
    if (grid.dim == 1) return tx;
    return std::make_shared<const Toeplitz2Op>(tx, tx);
}

std::vector<cplx> step_rhs(const StateField& u_prevprev, const DiagonalBlock& D, const SymmetricOperator& T)
{
    const std::size_t n = u_prevprev.u.size();
    if (D.size() != n || T.size() != n) {
        throw std::invalid_argument("step_rhs: state, diagonal and operator sizes differ");
    }
    std::vector<cplx> b(n);
    T.apply_complex(u_prevprev.u, b);
    const cplx i1{0.0, 1.0};
    for (std::size_t j = 0; j < n; ++j) {
        b[j] += (i1 - D.d[j]) * u_prevprev.u[j];
    }
    return b;
}

StateField bootstrap_first_level(const ProblemSpec& spec, const StateField& u0, const StepSolver& solver)
{
    spec.validate();
    if (u0.u.size() != spec.grid.unknowns()) throw std::invalid_argument("bootstrap: u0 does not match the grid");
    // Halving both T and D turns the CN step into the same (D - T + iI) form.
    const auto T = make_toeplitz(spec.grid, spec.alpha, 0.5);
    const double dt = spec.grid.dt();
    Approximations cache;

    StateField iterate = u0;
    for (int sweep = 0; sweep < 2; ++sweep) {
        StateField mid;
        mid.u.resize(u0.u.size());
        for (std::size_t i = 0; i < mid.u.size(); ++i) {
            mid.u[i] = 0.5 * (iterate.u[i] + u0.u[i]);
        }
        auto D = diagonal_from_state(mid, spec.rho, 0.5 * dt);
        const auto rhs = step_rhs(u0, D, *T);
        iterate.u = solve_complex(T, std::move(D), rhs, solver, &cache, nullptr, true);
    }
    iterate.level = u0.level + 1;
    return iterate;
}

double mass(const StateField& u_n, const StateField& u_np1, const GridSpec& grid)
{
    require_same_size(u_n, u_np1);
    double s = 0.0;
    for (std::size_t i = 0; i < u_n.u.size(); ++i) {
        s += std::norm(u_n.u[i]) + std::norm(u_np1.u[i]);
    }
    return 0.5 * cell_volume(grid) * s;
}

double energy(const StateField& u_n, const StateField& u_np1, const GridSpec& grid, double rho,
              const SymmetricOperator& T)
{
    require_same_size(u_n, u_np1);
    if (T.size() != u_n.u.size()) throw std::invalid_argument("energy: operator size mismatch");
    const double vol = cell_volume(grid);
    const double quad = (quadratic_form(T, u_np1.u) + quadratic_form(T, u_n.u)) / grid.dt();
    double quartic = 0.0;
    for (std::size_t i = 0; i < u_n.u.size(); ++i) {
        quartic += std::norm(u_np1.u[i]) * std::norm(u_n.u[i]);
    }
    return 0.5 * vol * quad - 0.5 * rho * vol * quartic;
}

TimeLevelSystem build_second_level_system(const ProblemSpec& spec, const StepSolver& bootstrap_solver)
{
    spec.validate();
    const auto u0 = initial_condition(spec.grid);
    const auto u1 = bootstrap_first_level(spec, u0, bootstrap_solver);
    TimeLevelSystem sys;
    sys.T = make_toeplitz(spec.grid, spec.alpha);
    sys.D = diagonal_from_state(u1, spec.rho, spec.grid.dt());
    sys.rhs = step_rhs(u0, sys.D, *sys.T);
    sys.omega_hint = optimal_omega(sys.D.lambda_max);
    return sys;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(ProblemSpec spec, StepSolver solver) : spec_(std::move(spec)), solver_(std::move(solver))
{
    spec_.validate();
    T_ = make_toeplitz(spec_.grid, spec_.alpha);
    prev_ = initial_condition(spec_.grid);
    curr_ = bootstrap_first_level(spec_, prev_, solver_);
}

Stepper::Stepper(ProblemSpec spec, StepSolver solver, StateField u0, StateField u1)
    : spec_(std::move(spec)), solver_(std::move(solver)), prev_(std::move(u0)), curr_(std::move(u1))
{
    spec_.validate();
    require_same_size(prev_, curr_);
    if (prev_.u.size() != spec_.grid.unknowns()) throw std::invalid_argument("Stepper: states do not match the grid");
    T_ = make_toeplitz(spec_.grid, spec_.alpha);
}

SolveReport Stepper::advance()
{
    auto D = diagonal_from_state(curr_, spec_.rho, spec_.grid.dt());
    const auto rhs = step_rhs(prev_, D, *T_);
    SolveReport report;
    StateField next;
    next.u = solve_complex(T_, std::move(D), rhs, solver_, &approx_, &report, strict_);
    next.level = curr_.level + 1;
    prev_ = std::move(curr_);
    curr_ = std::move(next);
    return report;
}

double Stepper::mass() const { return rfnse::mass(prev_, curr_, spec_.grid); }

double Stepper::energy() const { return rfnse::energy(prev_, curr_, spec_.grid, spec_.rho, *T_); }

// ---------------------------------------------------------------------------

void write_state_csv(const std::filesystem::path& path, const StateField& state)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "index,re,im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        out << i << ',' << state.u[i].real() << ',' << state.u[i].imag() << '\n';
    }
}

void write_state_binary(const std::filesystem::path& path, const StateField& state, const ProblemSpec& spec)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const auto& g = spec.grid;
    for (double v : {static_cast<double>(g.dim), static_cast<double>(g.M), static_cast<double>(g.N),
                     spec.alpha.value(), spec.rho, g.dt(), g.h(), static_cast<double>(state.level)}) {
        put_le(out, v);
    }
    for (const cplx& z : state.u) {
        put_le(out, z.real());
        put_le(out, z.imag());
    }
}

StateField read_state_binary(const std::filesystem::path& path, DumpHeader* header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    DumpHeader h{};
    h.dim = get_le(in);
    h.M = get_le(in);
    h.N = get_le(in);
    h.alpha = get_le(in);
    h.rho = get_le(in);
    h.dt = get_le(in);
    h.h = get_le(in);
    h.level = get_le(in);
    const auto m = static_cast<std::size_t>(h.M);
    const std::size_t n = h.dim == 1.0 ? m : m * m;
    StateField s;
    s.level = static_cast<int>(h.level);
    s.u.resize(n);
    for (auto& z : s.u) {
        const double re = get_le(in);
        z = {re, get_le(in)};
    }
    if (header) *header = h;
    return s;
}

}  // namespace rfnse
