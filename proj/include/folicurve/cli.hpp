#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "folicurve/types.hpp"

namespace folicurve::cli {

enum ExitCode : int {
    kSuccess = 0,
    kIdentityViolation = 1,
    kInputError = 2,
    kInadmissible = 3,
};

/// "a:b" or "a:b:step". Malformed text throws std::runtime_error.
struct TRange {
    Interval interval;
    std::optional<double> step;
};

TRange parse_t_range(const std::string& text);

/// Everything a subcommand may read. Values come from --config first and
/// are then overwritten by whichever flags were given.
struct RunConfig {
    std::string signature;  // empty: both for verify, riemannian otherwise
    std::string mutate;
    int n = 3;
    std::string k_expr;
    std::string r_expr;
    std::string t_range = "0:1";
    int samples = 11;
    int points_per_leaf = 8;
    double tolerance = -1.0;  // negative: command default

    double H = 0.0;
    double K = 1.0;
    double r0 = 1.0;
    double r1 = 0.0;
    double step = 1e-3;
    int sign_branch = 1;
    bool validate = false;
    int segments = 48;

    std::optional<double> k, r, K_in, R_in;

    std::string csv_path;
    std::string json_path;
    std::string off_path;
};

/// Full command line minus argv[0]. Structured results go to `out`,
/// diagnostics to `err`; returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace folicurve::cli
