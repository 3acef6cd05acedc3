#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace parlab {

struct RunOptions {
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;  // overrides config seeds when set
    int threads = 1;
};

// Parses and fully validates a JSON experiment config; throws
// std::invalid_argument with a description on any problem.
void validate_experiment(const std::string& config_path);

// Runs the configured experiment, writing manifest.json, results/*.csv and
// fields/*.ndjson under out_dir. Returns false when a configured expectation
// fails (the caller maps this to the acceptance-failure exit code). Throws
// std::invalid_argument for config problems and std::runtime_error for
// runtime failures.
bool run_experiment(const std::string& config_path, const RunOptions& opt);

}  // namespace parlab
