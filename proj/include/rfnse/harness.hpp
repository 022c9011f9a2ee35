/// @file harness.hpp
/// @brief Configuration and command implementations behind the rfnse executable.
///
/// A configuration is a flat key=value file plus key=value overrides. Every
/// command writes CSV to `output` ("-" for stdout), preceded by one metadata line
///
///     # rfnse 0.1.0 config_hash=<fnv1a-64> grid_convention=<match_n|exact_h> command=<name>
#pragma once

#include "rfnse/analysis.hpp"
#include "rfnse/scheme.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rfnse {

inline constexpr std::string_view kVersion = "0.1.0";

/// Invalid configuration; the message names the key and where it was set.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RunConfig {
public:
    /// Parses key=value lines; '#' starts a comment. `origin` labels error messages.
    static RunConfig parse(std::string_view text, const std::string& origin = "<config>");
    static RunConfig load(const std::string& path);

    /// Adds or replaces one "key=value" entry.
    void set(std::string_view assignment, const std::string& origin = "override");

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double real(const std::string& key, double fallback) const;
    [[nodiscard]] long integer(const std::string& key, long fallback) const;
    /// Comma list or start:step:stop range.
    [[nodiscard]] std::vector<double> reals(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> words(const std::string& key) const;

    /// FNV-1a 64 over the sorted key=value lines.
    [[nodiscard]] std::uint64_t hash() const;
    [[nodiscard]] std::string canonical() const;

private:
    struct Entry {
        std::string value;
        std::string origin;
    };
    [[noreturn]] void fail(const std::string& key, const std::string& why) const;
    std::map<std::string, Entry> entries_;
};

/// Grid, order and nonlinearity from the configuration. With `M_override` the
/// configured M / h is ignored.
[[nodiscard]] ProblemSpec problem_from_config(const RunConfig& cfg, std::size_t M_override = 0);
/// M from h: round(L/h) for match_n (the default), round(L/h) - 1 for exact_h.
[[nodiscard]] std::size_t grid_points(double length, double h, std::string_view convention);
[[nodiscard]] SolveOptions solve_options_from_config(const RunConfig& cfg);

[[nodiscard]] std::string metadata_line(const RunConfig& cfg, std::string_view command);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitResource = 4;

/// Each command validates the configuration, runs, writes its CSV and returns an exit code.
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_bench(const RunConfig& cfg, std::ostream& log);
int cmd_conserve(const RunConfig& cfg, std::ostream& log);
int cmd_eig(const RunConfig& cfg, std::ostream& log);
int cmd_omega_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_rho_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_alpha_sweep(const RunConfig& cfg, std::ostream& log);

/// Dispatches by subcommand name and maps exceptions to exit codes.
int run_command(std::string_view name, const RunConfig& cfg, std::ostream& log);

}  // namespace rfnse
