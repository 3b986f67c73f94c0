#pragma once

#include "smoothcert/json_io.hpp"

#include <string>

namespace smoothcert {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;

// What a command produced before the run record is attached.
struct CommandResult {
    nlohmann::json result;
    std::string csv; // empty when the command has no tabular form
    int exit_code = kExitOk;
};

struct RunOutput {
    std::string payload;   // file body in the requested format
    nlohmann::json record; // command, version, seed, samples, duration
    int exit_code = kExitOk;
};

[[nodiscard]] CommandResult run_underestimation(const nlohmann::json& params, const MonteCarloConfig& mc);
[[nodiscard]] CommandResult run_np_certify(const nlohmann::json& params, const MonteCarloConfig& mc);
[[nodiscard]] CommandResult run_grid(const nlohmann::json& params);
[[nodiscard]] CommandResult run_zeta(const nlohmann::json& params, const MonteCarloConfig& mc);
[[nodiscard]] CommandResult run_identify_cone(const nlohmann::json& params, const MonteCarloConfig& mc);
[[nodiscard]] CommandResult run_specfun_check();

// Dispatches on spec.command and formats the payload. JSON payloads embed
// the record under "run"; CSV payloads leave it to the caller.
[[nodiscard]] RunOutput execute(const RunSpec& spec);

// strips the wall-clock field so reruns can be compared byte for byte
[[nodiscard]] nlohmann::json without_duration(nlohmann::json payload);

} // namespace smoothcert
