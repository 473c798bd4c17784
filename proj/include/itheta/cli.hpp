#pragma once

// Job description and dispatcher behind the command-line tool. Reports are JSON with a
// fixed key order; the same input, options and version give byte-identical output.

#include <cstdint>
#include <optional>
#include <string>

#include "itheta/config_io.hpp"

namespace itheta {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kComputation = 3 };

struct JobSpec {
    std::string subcommand;  // check, cones, theta, verify, necessity, e2, config-gen
    std::string input;       // config file (optional for config-gen)
    std::string output;      // empty: stdout
    std::string format = "json";  // json | text

    std::uint64_t seed = 1;
    double tolerance = 1e-6;         // dead band / certificate tolerance
    std::string truncation = "13";   // M
    std::optional<std::string> bound;  // B
    double tau_re = 0.0, tau_im = 1.0;
    std::optional<std::string> mu;        // coset offset override, "a,b,c"
    std::optional<std::string> reference;  // negative regular vector for the reference weight
    bool completed = false;
    long radius = 10;
    std::size_t samples = 1000;

    std::size_t pair = 1;            // e2: pair (C_j, C_{j+1}), 1-based
    std::optional<std::string> x;    // e2: point
    double e2_tolerance = 1e-13;
    bool signless = false;

    std::size_t n = 5;               // config-gen
    std::string mode = "planar";
    unsigned winding = 1;
    bool non_monotone = false;
    std::string perturbation = "1/10";
};

struct RunResult {
    int exit_code = kOk;
    Json report;       // the report, or {"error": {...}} on failure
    std::string text;  // report rendered in the requested format
};

/// Never throws for validation or computation failures; they become exit codes 2 and 3.
RunResult run(const JobSpec& job);

/// Plain tables for --format text.
std::string render_text(const Json& report);

}  // namespace itheta
