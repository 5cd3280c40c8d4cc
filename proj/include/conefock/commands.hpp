#pragma once

#include <string>

#include <json.hpp>

#include "conefock/distinguish.hpp"

namespace conefock {

using Json = nlohmann::ordered_json;

// Configuration problems carry the JSON path of the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitCrossCheck = 3;

struct CommandOutcome {
    Json report;
    int exit_code = kExitPass;
};

// Shared config fields, parsed and validated before any computation.
struct ParsedConfig {
    std::uint64_t seed = 0;
    IsometricRep rep;
    bool has_rep = false;
    Window window;
    bool has_window = false;
    int cutoff = 2;
    int budget = 1;
    Flavor flavor = Flavor::ccr;
    Tolerances tol;
    Json raw;
};

ParsedConfig parse_config(const Json& config);

CommandOutcome cmd_verify_relations(const Json& config);
CommandOutcome cmd_cocycles(const Json& config);
CommandOutcome cmd_divisibility(const Json& config);
CommandOutcome cmd_decomposables(const Json& config);
CommandOutcome cmd_proper_search(const Json& config);
CommandOutcome cmd_witness(const Json& config);

// Dispatch by subcommand name; wraps errors into the report and maps them to
// exit codes (2 config, 3 internal cross-check).
CommandOutcome run_command(const std::string& command, const Json& config);

// The report minus its "timing" object, for byte-identity comparisons.
Json report_without_timing(Json report);

}  // namespace conefock
