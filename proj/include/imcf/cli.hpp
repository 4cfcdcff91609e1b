/// @file cli.hpp
/// @brief The `imcf` command line: run, verify, fit and demo.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "imcf/io.hpp"

namespace imcf::cli {

enum ExitCode : int { ok = 0, certificate_failure = 1, config_error = 2, flow_breakdown = 3 };

/// Built-in acceptance configurations used by `imcf demo`.
std::string horosphere_demo_config();
std::string perturbed_demo_config();

/// Runs one simulation and writes its outputs. `initial_override` replaces the
/// configured initial family (its time is reset to 0). Returns the exit code.
int run_simulation(const RunConfig& config, const std::filesystem::path& out_dir,
                   const GraphState* initial_override, std::ostream& log);

/// Entry point; args excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imcf::cli
