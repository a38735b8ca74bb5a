#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ergo/groups.hpp"
#include "ergo/operators.hpp"

namespace ergo {

// Experiment description, read from a single JSON document.  Every key is
// optional and defaulted, unknown keys are rejected, and writing always
// emits the full key set, so the canonical form of a document is
// config_to_json(config_from_json(text)).  Hashes are taken over that
// canonical form.

struct ScheduleSpec {
    std::string kind = "identity";  // identity | power | log | table
    int exponent = 2;               // read for kind "power" only
    std::vector<int> table;         // read for kind "table" only

    friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct OutputSpec {
    std::string csv;       // converge rows; empty writes to standard output
    std::string manifest;  // run manifest; empty skips the file

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::string mode = "exact";  // exact | float, arithmetic for converge
    std::string pair;            // serialized commuting pair, "" when unused
    std::string action;          // serialized single action, "" when unused
    std::map<std::string, std::string> measures;  // name -> serialized measure
    std::vector<std::string> observable;          // one rational per atom
    ScheduleSpec schedule;
    std::vector<double> p_values{2.0};  // entries in [1, inf], "inf" in JSON
    int n_max = 40;
    double threshold = 1e-6;
    std::size_t support_cap = kDefaultSupportCap;
    std::vector<std::string> checks;  // suite battery; empty skips everything
    OutputSpec out;
    bool timings = false;  // off by default so reruns are byte-identical

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Canonical JSON with sorted keys and a trailing newline.  The unbounded p
// value is written as the string "inf"; everything else is plain JSON.
std::string config_to_json(const ExperimentConfig& config);

// Throws ParseError on syntax errors, unknown keys, wrong types, and value
// violations (bad mode, p < 1, n_max < 1, threshold <= 0).
ExperimentConfig config_from_json(const std::string& text);

EccentricitySchedule schedule_from_spec(const ScheduleSpec& spec);

// fnv1a64 over the canonical JSON form.
std::uint64_t config_hash(const ExperimentConfig& config);

struct CheckVerdict {
    std::string name;
    std::string status;  // pass | fail | skipped
    std::string detail;  // witness on fail, reason on skip
    std::int64_t wallclock_ms = 0;
};

struct RunManifest {
    std::uint64_t config_hash = 0;
    std::string version;
    std::vector<CheckVerdict> checks;
};

// The hash renders as 16 hex digits so consumers never touch 64-bit JSON
// numbers.
std::string manifest_to_json(const RunManifest& manifest);

}  // namespace ergo
