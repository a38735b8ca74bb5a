#pragma once

#include <string>
#include <vector>

#include "ergo/config.hpp"

namespace ergo {

// Outcome of one command, decoupled from process plumbing so tests can
// drive commands directly.  output is the primary document (report text,
// CSV, or JSON), error carries witnesses for standard error, and the
// manifest is filled on every completed run.
//
// Exit codes: 0 pass, 2 property violation, 70 internal cap; 64 is reserved
// for ParseError, which propagates to the caller instead of being encoded.
struct CommandResult {
    int exit_code = 0;
    std::string output;
    std::string error;
    RunManifest manifest;
};

// Test hook: corrupts the left action of every pair the suite generates
// before the pair checks run, so a healthy battery must go red.
struct SuiteHooks {
    bool break_pairs = false;
};

CommandResult run_validate(const ExperimentConfig& config);
CommandResult run_decompose(const ExperimentConfig& config);
CommandResult run_independence(const ExperimentConfig& config);
CommandResult run_converge(const ExperimentConfig& config);
CommandResult run_koopman_norm(const ExperimentConfig& config, const std::string& element_text);
CommandResult run_suite(const ExperimentConfig& config, const SuiteHooks& hooks = {});

// Names the suite battery accepts, in manifest order.
const std::vector<std::string>& suite_check_names();

// Throws ParseError when the file cannot be read.
std::string read_text_file(const std::string& path);

// Writes through a sibling temp file and renames, so readers never observe
// a partial document.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace ergo
