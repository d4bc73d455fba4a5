#include "folicurve/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "folicurve/cmcgen.hpp"
#include "folicurve/error.hpp"
#include "folicurve/exprlang.hpp"
#include "folicurve/geometry.hpp"
#include "folicurve/identity.hpp"

namespace folicurve::cli {

using nlohmann::json;

namespace {

/// Input problems detected by the CLI itself; always exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw UsageError("invalid " + what + " '" + text + "'");
    }
    return v;
}

}  // namespace

TRange parse_t_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw UsageError("t-range must be a:b or a:b:step, got '" + text + "'");
    }
    TRange range;
    range.interval = {parse_double(parts[0], "t-range start"), parse_double(parts[1], "t-range end")};
    if (parts.size() == 3) {
        range.step = parse_double(parts[2], "t-range step");
        if (!(*range.step > 0.0)) throw UsageError("t-range step must be positive");
    }
    return range;
}

namespace {

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("folicurve", sink);
    logger->set_pattern("[%H:%M:%S.%e] [%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char* level = std::getenv("FOLICURVE_LOG")) {
        logger->set_level(spdlog::level::from_str(level));
    }
    return logger;
}

void load_config(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");

    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("signature", cfg.signature);
        get("mutate", cfg.mutate);
        get("n", cfg.n);
        get("t", cfg.t_range);
        get("samples", cfg.samples);
        get("points_per_leaf", cfg.points_per_leaf);
        get("tolerance", cfg.tolerance);
        get("H", cfg.H);
        get("r0", cfg.r0);
        get("r1", cfg.r1);
        get("step", cfg.step);
        get("sign_branch", cfg.sign_branch);
        get("validate", cfg.validate);
        get("segments", cfg.segments);
        get("csv", cfg.csv_path);
        get("json", cfg.json_path);
        get("off", cfg.off_path);
        if (j.contains("K")) {
            cfg.K = j.at("K").get<double>();
            cfg.K_in = cfg.K;
        }
        if (j.contains("R")) cfg.R_in = j.at("R").get<double>();
        // "k" and "r" are expressions for scan and numbers for convert.
        for (auto [key, expr, value] : {std::tuple{"k", &cfg.k_expr, &cfg.k},
                                        std::tuple{"r", &cfg.r_expr, &cfg.r}}) {
            if (!j.contains(key)) continue;
            const json& v = j.at(key);
            if (v.is_string()) {
                *expr = v.get<std::string>();
            } else {
                *value = v.get<double>();
                std::ostringstream os;
                os.precision(17);
                os << **value;
                *expr = os.str();
            }
        }
    } catch (const json::exception& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << content;
    if (!out) throw UsageError("failed writing '" + path + "'");
}

std::vector<Signature> signatures_for(const std::string& flag, bool allow_both) {
    if (allow_both && (flag.empty() || flag == "both")) {
        return {Signature::Riemannian, Signature::Lorentzian};
    }
    if (flag.empty()) return {Signature::Riemannian};
    if (auto sig = parse_signature(flag)) return {*sig};
    throw UsageError("unknown signature '" + flag + "'");
}

void require_dimension(int n) {
    if (n < 2) throw UsageError("n must be >= 2");
}

int map_error(const Error& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
        case ErrorKind::IdentityViolation: return kIdentityViolation;
        case ErrorKind::DegenerateNormal:
        case ErrorKind::NotSpacelike:
        case ErrorKind::NullGradient:
        case ErrorKind::VanishingLeadCoefficient:
        case ErrorKind::StepUnstable: return kInadmissible;
        default: return kInputError;
    }
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, spdlog::logger& log, std::ostream& out, std::ostream& err) {
    identity::BracketMutation mutation = identity::BracketMutation::None;
    if (cfg.mutate == "c3") {
        mutation = identity::BracketMutation::C3;
    } else if (cfg.mutate == "c2") {
        mutation = identity::BracketMutation::C2;
    } else if (cfg.mutate == "c1") {
        mutation = identity::BracketMutation::C1;
    } else if (!cfg.mutate.empty()) {
        throw UsageError("--mutate takes c3, c2 or c1");
    }

    json reports = json::array();
    bool all_pass = true;
    for (Signature sig : signatures_for(cfg.signature, true)) {
        log.info("verifying {} identity", to_string(sig));
        const auto report = identity::verify_squared_identity(sig, mutation);
        log.info("{}: pass={} in {:.1f} ms", to_string(sig), report.pass, report.elapsed_ms);
        if (!report.pass) {
            all_pass = false;
            err << "identity violation (" << to_string(sig)
                << "): residual = " << report.residual.to_string() << '\n';
        }
        reports.push_back(report.to_json());
    }
    out << json{{"pass", all_pass}, {"reports", reports}}.dump(2) << '\n';
    return all_pass ? kSuccess : kIdentityViolation;
}

json scan_summary(const geometry::ScanReport& report, double tolerance) {
    json j = report.to_json();
    j.erase("rows");
    j["cmc"] = report.is_cmc(tolerance);
    j["tolerance"] = tolerance;
    return j;
}

int cmd_scan(const RunConfig& cfg, spdlog::logger& log, std::ostream& out, std::ostream& err) {
    if (cfg.k_expr.empty() || cfg.r_expr.empty()) throw UsageError("scan needs --k and --r");
    require_dimension(cfg.n);
    const Signature sig = signatures_for(cfg.signature, false).front();
    const TRange range = parse_t_range(cfg.t_range);
    int samples = cfg.samples;
    if (range.step) {
        samples = static_cast<int>(std::floor(std::abs(range.interval.length()) / *range.step + 1e-9)) + 1;
    }
    if (samples < 1) throw UsageError("samples must be >= 1");
    if (cfg.points_per_leaf < 1) throw UsageError("points_per_leaf must be >= 1");
    const double tolerance = cfg.tolerance >= 0.0 ? cfg.tolerance : 1e-6;

    const auto profile = expr::ProfileFunctions::from_text(cfg.k_expr, cfg.r_expr);
    log.debug("k' = {}, r' = {}", expr::to_string(profile.k1), expr::to_string(profile.r1));

    // Check k > r > 0 on every leaf up front so bad input is a clean exit 2.
    std::vector<double> heights;
    for (int i = 0; i < samples; ++i) {
        const double s = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        heights.push_back(range.interval.start + s * range.interval.length());
    }
    for (double t : heights) {
        const FoliationJet jet = profile.jet(t);
        if (!(jet.k > jet.r && jet.r > 0.0)) {
            throw UsageError("need k > r > 0, but at t = " + std::to_string(t) + " k = " +
                             std::to_string(jet.k) + ", r = " + std::to_string(jet.r));
        }
    }

    geometry::ScanOptions options;
    options.points_per_leaf = cfg.points_per_leaf;
    const auto report = geometry::constancy_scan_at(profile.curves(), heights, cfg.n, sig, options);

    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, report.to_csv());
    if (!cfg.json_path.empty()) write_file(cfg.json_path, report.to_json().dump(2) + "\n");
    out << scan_summary(report, tolerance).dump(2) << '\n';

    if (report.rejected_points > 0) {
        err << report.rejected_points << " of " << report.rows.size()
            << " points rejected as not spacelike or degenerate\n";
        return kInadmissible;
    }
    if (!report.is_cmc(tolerance)) {
        log.warn("not constant mean curvature: max deviation {:.3e}", report.max_deviation);
    }
    return kSuccess;
}

int cmd_generate(const RunConfig& cfg, spdlog::logger& log, std::ostream& out, std::ostream& err) {
    require_dimension(cfg.n);
    const Signature sig = signatures_for(cfg.signature, false).front();
    if (!(cfg.K > 0.0)) throw UsageError("K must be positive");
    if (!(cfg.r0 > 0.0)) throw UsageError("r0 must be positive");
    if (cfg.sign_branch != 1 && cfg.sign_branch != -1) throw UsageError("sign_branch must be 1 or -1");
    const TRange range = parse_t_range(cfg.t_range);
    const double step = range.step.value_or(cfg.step);
    if (!(step > 0.0) || step > 1e-2) throw UsageError("step must lie in (0, 0.01]");
    if (!cfg.off_path.empty() && cfg.n != 2) throw UsageError("OFF export needs n = 2");
    if (cfg.samples < 1) throw UsageError("samples must be >= 1");

    log.info("integrating n={} H={} K={} r0={} r1={} over [{}, {}] step {}", cfg.n, cfg.H, cfg.K,
             cfg.r0, cfg.r1, range.interval.start, range.interval.end, step);
    const auto profile = cmcgen::integrate_profile(cfg.r0, cfg.r1, range.interval, step, cfg.K, cfg.H,
                                                   cfg.n, sig, cfg.sign_branch);

    json summary = {{"rows", profile.rows.size()},
                    {"halt", std::string(cmcgen::to_string(profile.halt))},
                    {"oriented_H", profile.oriented_H()}};
    if (!profile.rows.empty()) summary["t_end"] = profile.rows.back().t;
    if (profile.halt != cmcgen::HaltReason::None) summary["halt_detail"] = profile.halt_detail;

    if (cfg.csv_path.empty()) {
        out << profile.to_csv();
    } else {
        write_file(cfg.csv_path, profile.to_csv());
    }
    if (!cfg.json_path.empty()) write_file(cfg.json_path, profile.to_json().dump(2) + "\n");
    if (!cfg.off_path.empty() && !profile.rows.empty()) {
        write_file(cfg.off_path, cmcgen::export_off(profile, cfg.segments));
    }

    auto emit_summary = [&] {
        (cfg.csv_path.empty() ? err : out) << summary.dump(2) << '\n';
    };

    if (profile.halt != cmcgen::HaltReason::None) {
        summary["validation"] = "skipped";
        emit_summary();
        err << "integration halted: " << profile.halt_detail << '\n';
        return kInadmissible;
    }

    if (cfg.validate) {
        cmcgen::ValidationOptions options;
        if (cfg.tolerance >= 0.0) options.tolerance = cfg.tolerance;
        options.points_per_leaf = cfg.points_per_leaf;
        try {
            const auto report = cmcgen::validate_profile(profile, cfg.samples, options);
            summary["validation"] = scan_summary(report, options.tolerance);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ValidationFailed) throw;
            summary["validation"] = {{"pass", false}, {"message", e.what()}};
            emit_summary();
            err << "validation failed: " << e.what() << '\n';
            return kInputError;
        }
    }
    emit_summary();
    return kSuccess;
}

int cmd_convert(const RunConfig& cfg, std::ostream& out) {
    const bool euclid = cfg.k || cfg.r;
    const bool hyper = cfg.K_in || cfg.R_in;
    if (euclid == hyper) throw UsageError("convert takes either --k/--r or --K/--R");
    json j;
    if (euclid) {
        if (!cfg.k || !cfg.r) throw UsageError("convert needs both --k and --r");
        const auto c = geometry::euclidean_to_hyperbolic(*cfg.k, *cfg.r);
        j = {{"k", *cfg.k}, {"r", *cfg.r}, {"K", c.K}, {"R", c.R}};
    } else {
        if (!cfg.K_in || !cfg.R_in) throw UsageError("convert needs both --K and --R");
        const auto s = geometry::hyperbolic_to_euclidean({*cfg.K_in, *cfg.R_in});
        j = {{"K", *cfg.K_in}, {"R", *cfg.R_in}, {"k", s.k}, {"r", s.r}};
    }
    out << j.dump(2) << '\n';
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto logger = make_logger(err);
    RunConfig cfg;

    // The config file seeds the values before flags are bound so that any
    // flag given on the command line wins.
    std::string config_path;
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
        }
        if (!config_path.empty()) load_config(config_path, cfg);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    CLI::App app{"Curvature tools for sphere-foliated hypersurfaces in H^n x R", "folicurve"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", config_path, "JSON file with default parameter values");

    auto* verify = app.add_subcommand("verify", "Check the squared mean curvature identity symbolically");
    verify->add_option("--signature", cfg.signature, "riemannian, lorentzian or both");
    verify->add_option("--mutate", cfg.mutate, "Perturb one bracket coefficient (c3, c2, c1)");

    auto* scan = app.add_subcommand("scan", "Evaluate H over a foliation given by k(t), r(t)");
    auto* generate = app.add_subcommand("generate", "Integrate a rotationally symmetric CMC profile");
    auto* convert = app.add_subcommand("convert", "Convert between Euclidean and hyperbolic sphere data");

    for (auto* sub : {scan, generate}) {
        sub->add_option("--signature", cfg.signature, "riemannian or lorentzian");
        sub->add_option("--n", cfg.n, "Dimension of the hyperbolic factor");
        sub->add_option("--t", cfg.t_range, "Height range a:b[:step]");
        sub->add_option("--samples", cfg.samples, "Number of leaves to check");
        sub->add_option("--points", cfg.points_per_leaf, "Sample points per leaf");
        sub->add_option("--tolerance", cfg.tolerance, "Curvature tolerance");
        sub->add_option("--csv", cfg.csv_path, "CSV output path");
        sub->add_option("--json", cfg.json_path, "JSON output path");
    }
    scan->add_option("--k", cfg.k_expr, "Euclidean center height k(t)");
    scan->add_option("--r", cfg.r_expr, "Euclidean radius r(t)");

    generate->add_option("--H", cfg.H, "Target mean curvature");
    generate->add_option("--K", cfg.K, "Constant hyperbolic center height");
    generate->add_option("--r0", cfg.r0, "Initial Euclidean radius");
    generate->add_option("--r1", cfg.r1, "Initial r'");
    generate->add_option("--step", cfg.step, "RK4 step (also settable as the t-range step)");
    generate->add_option("--sign-branch", cfg.sign_branch, "Square root branch, 1 or -1");
    generate->add_flag("--validate", cfg.validate, "Re-check the profile with the curvature scan");
    generate->add_option("--off", cfg.off_path, "OFF mesh output path (n = 2)");
    generate->add_option("--segments", cfg.segments, "Mesh segments per leaf circle");

    convert->add_option("--k", cfg.k, "Euclidean center height");
    convert->add_option("--r", cfg.r, "Euclidean radius");
    convert->add_option("--K", cfg.K_in, "Hyperbolic center height");
    convert->add_option("--R", cfg.R_in, "Hyperbolic radius");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (verify->parsed()) return cmd_verify(cfg, *logger, out, err);
        if (scan->parsed()) return cmd_scan(cfg, *logger, out, err);
        if (generate->parsed()) return cmd_generate(cfg, *logger, out, err);
        if (convert->parsed()) return cmd_convert(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const expr::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        return map_error(e, err);
    }
    return kInputError;
}

}  // namespace folicurve::cli
