#pragma once

// Command-line front end. `run` is the whole program minus process plumbing so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace psig::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_io = 3,
    exit_numeric = 4,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SVG for a curve or estimate document: band + three lines (estimate), one line
/// (curve), or a heatmap of the mean (2-D grids).
[[nodiscard]] std::string render_svg(const nlohmann::json& artifact);

}  // namespace psig::cli
