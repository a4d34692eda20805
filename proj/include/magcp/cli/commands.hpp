#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "magcp/cli/config.hpp"

namespace magcp::cli {

inline constexpr const char* units_line = "# units: U in hbar*Gamma0; F in hbar*Gamma0*k_e; z in 1/k_e";

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_no_result = 3, exit_not_converged = 4 };

using Cell = std::variant<double, bool, std::string>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool all_converged = true;
    std::vector<std::string> notes;  // particle build diagnostics, surface warnings
};

// One row per grid point, evaluated in parallel and ordered by grid index.
Table cmd_potential(const JobConfig& cfg);
Table cmd_force(const JobConfig& cfg);
Table cmd_threshold(const JobConfig& cfg);
// Throws NoEquilibrium / BracketError. The bracket defaults to the grid ends, then to [0.1, 1000].
Table cmd_equilibrium(const JobConfig& cfg);

void write_csv(std::ostream& out, const Table& t, int precision);
// {"command", "units", "config": to_json(cfg), "notes", "converged", "rows": [{column: value}]}
void write_json(std::ostream& out, const Table& t, const JobConfig& cfg);

// Full command line: subcommand plus flags. Output goes to `out` unless --output / output.path is set.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magcp::cli
