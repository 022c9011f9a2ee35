#include "rfnse/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

namespace rfnse {

namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "dim",       "alpha",       "rho",        "M",          "h",         "N",          "dt",
        "t_end",     "a",           "b",          "grid_convention",         "solver",     "precond",
        "method",    "methods",     "omega",      "tol",        "max_iter",  "memory_budget_mb",
        "threads",   "output",      "dump",       "dump_format", "sizes",    "h_list",     "omegas",
        "rhos",      "alphas",      "operator",   "ritz_steps", "bootstrap_tol", "strict"};
    return keys;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

bool parse_double(const std::string& s, double& v)
{
    // Accept a/b fractions such as 1/32.
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        double num = 0, den = 0;
        if (!parse_double(s.substr(0, slash), num) || !parse_double(s.substr(slash + 1), den) || den == 0) {
            return false;
        }
        v = num / den;
        return true;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc{} && ptr == last && std::isfinite(v);
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-") {
            stream_ = &std::cout;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("output: cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string method_list_key(const RunConfig& cfg)
{
    return cfg.has("methods") ? "methods" : "method";
}

std::vector<MethodSpec> methods_from_config(const RunConfig& cfg, const std::vector<std::string>& fallback)
{
    auto names = cfg.words(method_list_key(cfg));
    if (names.empty()) names = fallback;
    std::vector<MethodSpec> out;
    for (const auto& n : names) {
        try {
            out.push_back(MethodSpec::parse(n));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("methods: ") + e.what());
        }
    }
    return out;
}

/// Method from solver= and precond= keys.
MethodSpec single_method(const RunConfig& cfg)
{
    if (cfg.has("method")) return methods_from_config(cfg, {}).front();
    MethodSpec m;
    try {
        m.method = parse_method(cfg.text("solver", "gmres"));
        m.precond = m.method == Method::tban ? PrecondKind::none : parse_precond(cfg.text("precond", "tau"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return m;
}

bool omega_is_auto(const RunConfig& cfg) { return cfg.text("omega", "1") == "auto"; }

int threads_from_config(const RunConfig& cfg)
{
    const long t = cfg.integer("threads", 1);
    if (t < 1) throw ConfigError("threads: must be >= 1");
    return static_cast<int>(t);
}

int status_exit(const RunRecord& r)
{
    if (r.status == "oom") return kExitResource;
    return r.status == "converged" ? kExitOk : kExitSolver;
}

}  // namespace

// ---------------------------------------------------------------------------

RunConfig RunConfig::parse(std::string_view text, const std::string& origin)
{
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        cfg.set(line, origin + ":" + std::to_string(lineno));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void RunConfig::set(std::string_view assignment, const std::string& origin)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(origin + ": expected key=value, got '" + std::string(assignment) + "'");
    }
    auto key = trim(assignment.substr(0, eq));
    auto value = trim(assignment.substr(eq + 1));
    if (!known_keys().count(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(origin + ": empty value for '" + key + "'");
    entries_[key] = {value, origin};
}

void RunConfig::fail(const std::string& key, const std::string& why) const
{
    const auto it = entries_.find(key);
    const std::string where = it == entries_.end() ? "default" : it->second.origin;
    throw ConfigError(where + ": " + key + ": " + why);
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double RunConfig::real(const std::string& key, double fallback) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v = 0;
    if (!parse_double(it->second.value, v)) fail(key, "not a number: '" + it->second.value + "'");
    return v;
}

long RunConfig::integer(const std::string& key, long fallback) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto& s = it->second.value;
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(key, "not an integer: '" + s + "'");
    return v;
}

std::vector<double> RunConfig::reals(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) return {};
    const auto& s = it->second.value;
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        double lo = 0, step = 0, hi = 0;
        if (parts.size() != 3 || !parse_double(parts[0], lo) || !parse_double(parts[1], step) ||
            !parse_double(parts[2], hi) || !(step > 0) || hi < lo) {
            fail(key, "expected start:step:stop, got '" + s + "'");
        }
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    for (const auto& p : split(s, ',')) {
        double v = 0;
        if (!parse_double(p, v)) fail(key, "not a number: '" + p + "'");
        out.push_back(v);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

std::vector<std::string> RunConfig::words(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) return {};
    return split(it->second.value, ',');
}

std::string RunConfig::canonical() const
{
    std::string s;
    for (const auto& [k, e] : entries_) {
        if (k == "output" || k == "dump" || k == "threads") continue;  // do not change results
        s += k + "=" + e.value + "\n";
    }
    return s;
}

std::uint64_t RunConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------

std::size_t grid_points(double length, double h, std::string_view convention)
{
    if (!(h > 0.0) || !(h < length)) throw ConfigError("h: must satisfy 0 < h < b - a");
    const auto cells = static_cast<long>(std::llround(length / h));
    if (convention == "match_n") return static_cast<std::size_t>(cells);
    if (convention == "exact_h") return static_cast<std::size_t>(std::max(1L, cells - 1));
    throw ConfigError("grid_convention: expected match_n or exact_h, got '" + std::string(convention) + "'");
}

ProblemSpec problem_from_config(const RunConfig& cfg, std::size_t M_override)
{
    ProblemSpec spec;
    auto& g = spec.grid;
    g.dim = static_cast<int>(cfg.integer("dim", 1));
    if (g.dim != 1 && g.dim != 2) throw ConfigError("dim: must be 1 or 2");
    g.a = cfg.real("a", g.dim == 1 ? -20.0 : -5.0);
    g.b = cfg.real("b", g.dim == 1 ? 20.0 : 5.0);
    if (!(g.b > g.a)) throw ConfigError("a, b: need b > a");

    try {
        spec.alpha = FractionalOrder(cfg.real("alpha", 1.5));
    } catch (const std::invalid_argument&) {
        throw ConfigError("alpha: must satisfy 1 < alpha <= 2, got " + cfg.text("alpha", "?"));
    }
    spec.rho = cfg.real("rho", g.dim == 1 ? 2.0 : 1.0);
    if (!(spec.rho >= 0.0)) throw ConfigError("rho: must be >= 0");

    const auto convention = cfg.text("grid_convention", "match_n");
    if (M_override > 0) {
        g.M = M_override;
    } else if (cfg.has("M")) {
        const long M = cfg.integer("M", 0);
        if (M < 1) throw ConfigError("M: must be >= 1");
        g.M = static_cast<std::size_t>(M);
    } else if (cfg.has("h")) {
        g.M = grid_points(g.b - g.a, cfg.real("h", 0.0), convention);
    } else {
        throw ConfigError("M or h must be given");
    }

    // Time grid: any two of N, dt, t_end; defaults N=200 and the benchmark step
    // (t_end = 7.5 in 1D, 10 in 2D).
    const double default_dt = g.dim == 1 ? 0.0375 : 0.05;
    const bool hasN = cfg.has("N");
    const bool hasdt = cfg.has("dt");
    const bool hasT = cfg.has("t_end");
    if (hasN && hasdt && hasT) throw ConfigError("N, dt, t_end: give at most two of them");
    if (hasN && cfg.integer("N", 0) < 1) throw ConfigError("N: must be >= 1");
    if (hasdt && !(cfg.real("dt", 0) > 0)) throw ConfigError("dt: must be positive");
    if (hasT && !(cfg.real("t_end", 0) > 0)) throw ConfigError("t_end: must be positive");
    if (hasdt && hasT) {
        const double dt = cfg.real("dt", 0);
        const double T = cfg.real("t_end", 0);
        g.N = static_cast<int>(std::llround(T / dt));
        if (g.N < 1 || std::abs(g.N * dt - T) > 1e-9 * T) throw ConfigError("dt: must divide t_end");
        g.t_end = T;
    } else if (hasN && hasT) {
        g.N = static_cast<int>(cfg.integer("N", 0));
        g.t_end = cfg.real("t_end", 0);
    } else {
        const double dt = hasdt ? cfg.real("dt", 0) : default_dt;
        g.N = hasN ? static_cast<int>(cfg.integer("N", 0)) : (hasT ? 0 : 200);
        if (hasT) g.N = static_cast<int>(std::max(1LL, std::llround(cfg.real("t_end", 0) / dt)));
        g.t_end = g.N * dt;
    }
    spec.validate();
    return spec;
}

SolveOptions solve_options_from_config(const RunConfig& cfg)
{
    SolveOptions o;
    o.tol = cfg.real("tol", 1e-8);
    o.max_iter = static_cast<int>(cfg.integer("max_iter", 2000));
    if (!omega_is_auto(cfg)) o.omega = cfg.real("omega", 1.0);
    const double mb = cfg.real("memory_budget_mb", 4096.0);
    if (!(mb > 0)) throw ConfigError("memory_budget_mb: must be positive");
    o.memory_budget = static_cast<std::size_t>(mb * 1024.0 * 1024.0);
    o.record_history = false;
    try {
        o.precond = parse_precond(cfg.text("precond", "tau"));
        o.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return o;
}

std::string metadata_line(const RunConfig& cfg, std::string_view command)
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    return "# rfnse " + std::string(kVersion) + " config_hash=" + hex +
           " grid_convention=" + cfg.text("grid_convention", "match_n") + " command=" + std::string(command);
}

// ---------------------------------------------------------------------------

namespace {

StepSolver bootstrap_from_config(const RunConfig& cfg)
{
    StepSolver s = default_bootstrap_solver();
    s.options.tol = cfg.real("bootstrap_tol", s.options.tol);
    if (!(s.options.tol > 0)) throw ConfigError("bootstrap_tol: must be positive");
    return s;
}

RunRecord solve_one(const RunConfig& cfg, const ProblemSpec& spec, const TimeLevelSystem& sys, MethodSpec method,
                    Approximations* cache, std::vector<double>* solution)
{
    auto opts = solve_options_from_config(cfg);
    RunRecord r;
    if (!solution) return run_method(sys, spec, method, opts, omega_is_auto(cfg), cache);

    // Same as run_method but keeps the solution for dumping.
    if (omega_is_auto(cfg)) opts.omega = sys.omega_hint;
    opts.precond = method.precond;
    r.dim = spec.grid.dim;
    r.M = spec.grid.M;
    r.n = spec.grid.unknowns();
    r.alpha = spec.alpha.value();
    r.rho = spec.rho;
    r.omega = opts.omega;
    r.method = method.name();
    try {
        const auto block = sys.block();
        auto res = solve_block(block, method.method, opts, cache);
        r.iterations = res.report.iterations;
        r.relres = res.report.final_relres;
        r.wall_time = res.report.wall_time;
        r.status = res.report.status;
        *solution = std::move(res.x);
    } catch (const ResourceGuardError&) {
        r.status = "oom";
        r.relres = std::nan("");
    }
    return r;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log)
{
    const auto spec = problem_from_config(cfg);
    const auto method = single_method(cfg);
    const auto dump = cfg.text("dump", "");
    const auto format = cfg.text("dump_format", "csv");
    if (format != "csv" && format != "binary") throw ConfigError("dump_format: expected csv or binary");
    Output out(cfg.text("output", "-"));

    const auto sys = build_second_level_system(spec, bootstrap_from_config(cfg));
    std::vector<double> x;
    auto r = solve_one(cfg, spec, sys, method, nullptr, dump.empty() ? nullptr : &x);
    r.sweep = "solve";
    r.value = static_cast<double>(spec.grid.M);
    *out << metadata_line(cfg, "solve") << '\n' << csv_header() << '\n' << csv_row(r) << '\n';

    if (!dump.empty() && !x.empty()) {
        StateField u2;
        u2.u = lift(BlockVector(std::move(x)));
        u2.level = 2;
        if (format == "csv") {
            write_state_csv(dump, u2);
        } else {
            write_state_binary(dump, u2, spec);
        }
    }
    if (r.status != "converged") {
        log << "solve: " << r.method << " stopped with status " << r.status << '\n';
    }
    return status_exit(r);
}

int cmd_bench(const RunConfig& cfg, std::ostream& log)
{
    const int dim = static_cast<int>(cfg.integer("dim", 1));
    std::vector<std::size_t> sizes;
    if (cfg.has("sizes")) {
        for (double v : cfg.reals("sizes")) {
            if (!(v >= 1) || v != std::floor(v)) throw ConfigError("sizes: entries must be positive integers");
            sizes.push_back(static_cast<std::size_t>(v));
        }
    } else if (cfg.has("h_list")) {
        const double L = cfg.real("b", dim == 1 ? 20.0 : 5.0) - cfg.real("a", dim == 1 ? -20.0 : -5.0);
        for (double h : cfg.reals("h_list")) {
            sizes.push_back(grid_points(L, h, cfg.text("grid_convention", "match_n")));
        }
    } else {
        sizes.push_back(problem_from_config(cfg).grid.M);
    }
    const auto methods = methods_from_config(cfg, {"tau-gmres", "c-gmres", "gmres"});
    const int threads = threads_from_config(cfg);
    Output out(cfg.text("output", "-"));

    std::vector<RunRecord> rows(sizes.size() * methods.size());
    parallel_for(sizes.size(), threads, [&](std::size_t i) {
        const auto spec = problem_from_config(cfg, sizes[i]);
        const auto sys = build_second_level_system(spec, bootstrap_from_config(cfg));
        Approximations cache;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            auto& r = rows[i * methods.size() + m];
            r = solve_one(cfg, spec, sys, methods[m], &cache, nullptr);
            r.sweep = "M";
            r.value = static_cast<double>(sizes[i]);
        }
    });
    *out << metadata_line(cfg, "bench") << '\n' << csv_header() << '\n';
    for (const auto& r : rows) {
        *out << csv_row(r) << '\n';
        if (r.status != "converged") log << "bench: M=" << r.M << ' ' << r.method << ' ' << r.status << '\n';
    }
    return kExitOk;
}

int cmd_conserve(const RunConfig& cfg, std::ostream& log)
{
    const auto spec = problem_from_config(cfg);
    StepSolver solver;
    const auto method = single_method(cfg);
    solver.method = method.method;
    solver.options = solve_options_from_config(cfg);
    solver.options.precond = method.precond;
    if (!cfg.has("tol")) solver.options.tol = 1e-15;
    solver.auto_omega = omega_is_auto(cfg);
    const bool strict = cfg.text("strict", "false") == "true";
    Output out(cfg.text("output", "-"));

    Stepper stepper(spec, solver);
    stepper.set_strict(strict);
    *out << metadata_line(cfg, "conserve") << '\n' << "n,t,mass,energy,mass_relerr,energy_relerr,IT,relres\n";
    const double q0 = stepper.mass();
    const double e0 = stepper.energy();
    const double dt = spec.grid.dt();
    auto rel = [](double v, double ref) { return ref != 0.0 ? std::abs(v - ref) / std::abs(ref) : std::abs(v); };
    auto emit = [&](int n, int it, double relres) {
        const double q = stepper.mass();
        const double e = stepper.energy();
        char buf[256];
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.17g,%.17g,%.6e,%.6e,%d,%.6e", n, n * dt, q, e, rel(q, q0),
                      rel(e, e0), it, relres);
        *out << buf << '\n';
    };
    emit(0, 0, 0.0);
    double worst = 0.0;
    for (int n = 1; n < spec.grid.N; ++n) {
        const auto rep = stepper.advance();
        worst = std::max(worst, rep.final_relres);
        emit(n, rep.iterations, rep.final_relres);
    }
    log << "conserve: largest step residual " << worst << '\n';
    return kExitOk;
}

int cmd_eig(const RunConfig& cfg, std::ostream& log)
{
    const auto tag = [&] {
        try {
            return parse_spectrum_tag(cfg.text("operator", "Ftau_inv_R"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("operator: ") + e.what());
        }
    }();
    const auto spec = problem_from_config(cfg);
    Output out(cfg.text("output", "-"));
    *out << metadata_line(cfg, "eig") << '\n';

    std::vector<cplx> eigs;
    switch (tag) {
    case SpectrumTag::T1:
    case SpectrumTag::T2:
    case SpectrumTag::tauT1:
    case SpectrumTag::tauT2: {
        const auto rep = check_bracket(tag, spec.grid.M, spec.alpha, spec.grid.dt(), spec.grid.a, spec.grid.b,
                                       spec.grid.M * spec.grid.M > kDenseLimit);
        *out << "# bracket_lower=" << rep.lower << " bracket_upper=" << rep.upper << " min_eig=" << rep.min_eig
             << " max_eig=" << rep.max_eig << '\n';
        const double h = spec.grid.h();
        const auto T = ToeplitzOp::make(spec.alpha, spec.grid.dt() / std::pow(h, spec.alpha.value()), spec.grid.M);
        const bool tau = tag == SpectrumTag::tauT1 || tag == SpectrumTag::tauT2;
        auto e = symmetric_eigs_dense(tau ? tau_from_toeplitz(*T).dense() : T->dense(), spec.grid.M);
        if (tag == SpectrumTag::T2 || tag == SpectrumTag::tauT2) {
            std::vector<double> sums;
            for (double x : e)
                for (double y : e) sums.push_back(x + y);
            std::sort(sums.begin(), sums.end());
            e = std::move(sums);
        }
        for (double v : e) eigs.emplace_back(v, 0.0);
        break;
    }
    default: {
        const auto sys = build_second_level_system(spec, bootstrap_from_config(cfg));
        const double omega = omega_is_auto(cfg) ? sys.omega_hint : cfg.real("omega", 1.0);
        if (!(omega > 0)) throw ConfigError("omega: must be positive");
        PrecondKind kind = PrecondKind::none;
        if (tag == SpectrumTag::Ftau_inv_R) kind = PrecondKind::tau;
        if (tag == SpectrumTag::FC_inv_R) kind = PrecondKind::circulant;
        if (tag == SpectrumTag::F_inv_R) kind = PrecondKind::exact;
        SpectrumOptions so;
        so.ritz_steps = static_cast<int>(cfg.integer("ritz_steps", so.ritz_steps));
        const auto sample = preconditioned_spectrum(sys.block(), kind, omega, so);
        const auto st = cluster_stats(sample.eigenvalues);
        *out << "# n=" << sample.n << " ritz=" << (sample.ritz ? "true" : "false") << " steps=" << sample.steps
             << " radius95=" << st.radius95 << " radius100=" << st.radius100
             << " sigma=" << sigma_bound(omega, sys.D.lambda_max) << '\n';
        eigs = sample.eigenvalues;
        break;
    }
    }
    *out << "re,im,operator_tag\n";
    for (const auto& z : eigs) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", z.real(), z.imag());
        *out << buf << to_string(tag) << '\n';
    }
    log << "eig: " << eigs.size() << " eigenvalues of " << to_string(tag) << '\n';
    return kExitOk;
}

namespace {

int emit_rows(const RunConfig& cfg, std::string_view command, const std::vector<RunRecord>& rows)
{
    Output out(cfg.text("output", "-"));
    *out << metadata_line(cfg, command) << '\n' << csv_header() << '\n';
    for (const auto& r : rows) *out << csv_row(r) << '\n';
    return kExitOk;
}

std::vector<double> required_list(const RunConfig& cfg, const std::string& key)
{
    if (!cfg.has(key)) throw ConfigError(key + ": sweep list is required");
    auto v = cfg.reals(key);
    if (v.empty()) throw ConfigError(key + ": sweep list is empty");
    return v;
}

}  // namespace

int cmd_omega_sweep(const RunConfig& cfg, std::ostream&)
{
    const auto spec = problem_from_config(cfg);
    const auto omegas = required_list(cfg, "omegas");
    for (double w : omegas) {
        if (!(w > 0)) throw ConfigError("omegas: entries must be positive");
    }
    return emit_rows(cfg, "omega-sweep",
                     omega_sweep(spec, omegas, solve_options_from_config(cfg), threads_from_config(cfg)));
}

int cmd_rho_sweep(const RunConfig& cfg, std::ostream&)
{
    const auto spec = problem_from_config(cfg);
    const auto rhos = required_list(cfg, "rhos");
    for (double r : rhos) {
        if (!(r >= 0)) throw ConfigError("rhos: entries must be >= 0");
    }
    const auto methods = methods_from_config(cfg, {"tau-gmres", "c-gmres", "gmres"});
    return emit_rows(cfg, "rho-sweep",
                     rho_sweep(spec, rhos, methods, solve_options_from_config(cfg), threads_from_config(cfg)));
}

int cmd_alpha_sweep(const RunConfig& cfg, std::ostream&)
{
    const auto spec = problem_from_config(cfg);
    const auto alphas = required_list(cfg, "alphas");
    for (double a : alphas) {
        if (!(a > 1.0 && a <= 2.0 + 1e-12)) throw ConfigError("alphas: entries must lie in (1, 2]");
    }
    std::vector<double> clipped;
    for (double a : alphas) clipped.push_back(std::min(a, 2.0));
    const auto methods = methods_from_config(cfg, {"tau-gmres", "c-gmres", "gmres"});
    return emit_rows(cfg, "alpha-sweep",
                     alpha_sweep(spec, clipped, methods, solve_options_from_config(cfg), threads_from_config(cfg)));
}

int run_command(std::string_view name, const RunConfig& cfg, std::ostream& log)
{
    try {
        if (name == "solve") return cmd_solve(cfg, log);
        if (name == "bench") return cmd_bench(cfg, log);
        if (name == "conserve") return cmd_conserve(cfg, log);
        if (name == "eig") return cmd_eig(cfg, log);
        if (name == "omega-sweep") return cmd_omega_sweep(cfg, log);
        if (name == "rho-sweep") return cmd_rho_sweep(cfg, log);
        if (name == "alpha-sweep") return cmd_alpha_sweep(cfg, log);
        log << "unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceGuardError& e) {
        log << "resource guard: " << e.what() << '\n';
        return kExitResource;
    } catch (const SolverError& e) {
        log << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const BracketViolation& e) {
        log << "bracket violation: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        log << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace rfnse
