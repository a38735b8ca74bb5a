#include "ergo/config.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

#include "ergo/errors.hpp"
#include "ergo/splitmix.hpp"

namespace ergo {

namespace {

using nlohmann::json;

json p_values_to_json(const std::vector<double>& values) {
    json out = json::array();
    for (double p : values) {
        if (std::isinf(p)) {
            out.push_back("inf");
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::vector<double> p_values_from_json(const json& node) {
    if (!node.is_array()) throw ParseError("p_values must be an array");
    std::vector<double> values;
    for (const auto& entry : node) {
        double p = 0;
        if (entry.is_string()) {
            if (entry.get<std::string>() != "inf") {
                throw ParseError("p value strings must be \"inf\"");
            }
            p = std::numeric_limits<double>::infinity();
        } else if (entry.is_number()) {
            p = entry.get<double>();
        } else {
            throw ParseError("p values must be numbers or \"inf\"");
        }
        if (!(p >= 1.0)) throw ParseError("p values must be at least 1");
        values.push_back(p);
    }
    return values;
}

std::string hash_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["seed"] = config.seed;
    j["mode"] = config.mode;
    j["pair"] = config.pair;
    j["action"] = config.action;
    j["measures"] = config.measures;
    j["observable"] = config.observable;
    j["schedule"]["kind"] = config.schedule.kind;
    j["schedule"]["exponent"] = config.schedule.exponent;
    j["schedule"]["table"] = config.schedule.table;
    j["p_values"] = p_values_to_json(config.p_values);
    j["n_max"] = config.n_max;
    j["threshold"] = config.threshold;
    j["support_cap"] = config.support_cap;
    j["checks"] = config.checks;
    j["out"]["csv"] = config.out.csv;
    j["out"]["manifest"] = config.out.manifest;
    j["timings"] = config.timings;
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& error) {
        throw ParseError(std::string("config: ") + error.what());
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object");

    static const std::set<std::string> known = {
        "seed",   "mode",     "pair",        "action", "measures", "observable",
        "schedule", "p_values", "n_max",     "threshold", "support_cap",
        "checks", "out",      "timings"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ParseError("unknown config key: " + key);
    }

    ExperimentConfig config;
    try {
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("mode")) config.mode = j.at("mode").get<std::string>();
        if (j.contains("pair")) config.pair = j.at("pair").get<std::string>();
        if (j.contains("action")) config.action = j.at("action").get<std::string>();
        if (j.contains("measures")) {
            config.measures = j.at("measures").get<std::map<std::string, std::string>>();
        }
        if (j.contains("observable")) {
            config.observable = j.at("observable").get<std::vector<std::string>>();
        }
        if (j.contains("schedule")) {
            const json& node = j.at("schedule");
            if (!node.is_object()) throw ParseError("schedule must be an object");
            for (const auto& [key, value] : node.items()) {
                if (key != "kind" && key != "exponent" && key != "table") {
                    throw ParseError("unknown schedule key: " + key);
                }
            }
            if (node.contains("kind")) config.schedule.kind = node.at("kind").get<std::string>();
            if (node.contains("exponent")) {
                config.schedule.exponent = node.at("exponent").get<int>();
            }
            if (node.contains("table")) {
                config.schedule.table = node.at("table").get<std::vector<int>>();
            }
        }
        if (j.contains("p_values")) config.p_values = p_values_from_json(j.at("p_values"));
        if (j.contains("n_max")) config.n_max = j.at("n_max").get<int>();
        if (j.contains("threshold")) config.threshold = j.at("threshold").get<double>();
        if (j.contains("support_cap")) {
            config.support_cap = j.at("support_cap").get<std::size_t>();
        }
        if (j.contains("checks")) config.checks = j.at("checks").get<std::vector<std::string>>();
        if (j.contains("out")) {
            const json& node = j.at("out");
            if (!node.is_object()) throw ParseError("out must be an object");
            for (const auto& [key, value] : node.items()) {
                if (key != "csv" && key != "manifest") {
                    throw ParseError("unknown out key: " + key);
                }
            }
            if (node.contains("csv")) config.out.csv = node.at("csv").get<std::string>();
            if (node.contains("manifest")) {
                config.out.manifest = node.at("manifest").get<std::string>();
            }
        }
        if (j.contains("timings")) config.timings = j.at("timings").get<bool>();
    } catch (const json::exception& error) {
        throw ParseError(std::string("config: ") + error.what());
    }

    if (config.mode != "exact" && config.mode != "float") {
        throw ParseError("mode must be \"exact\" or \"float\", got \"" + config.mode + "\"");
    }
    if (config.schedule.kind != "identity" && config.schedule.kind != "power" &&
        config.schedule.kind != "log" && config.schedule.kind != "table") {
        throw ParseError("unknown schedule kind: " + config.schedule.kind);
    }
    if (config.n_max < 1) throw ParseError("n_max must be at least 1");
    if (!(config.threshold > 0)) throw ParseError("threshold must be positive");
    return config;
}

EccentricitySchedule schedule_from_spec(const ScheduleSpec& spec) {
    if (spec.kind == "identity") return EccentricitySchedule::identity();
    if (spec.kind == "power") return EccentricitySchedule::power(spec.exponent);
    if (spec.kind == "log") return EccentricitySchedule::log_growth();
    if (spec.kind == "table") return EccentricitySchedule::from_table(spec.table);
    throw ParseError("unknown schedule kind: " + spec.kind);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    const std::string canonical = config_to_json(config);
    return fnv1a64(canonical.data(), canonical.size());
}

std::string manifest_to_json(const RunManifest& manifest) {
    json j;
    j["config_hash"] = hash_hex(manifest.config_hash);
    j["version"] = manifest.version;
    j["checks"] = json::array();
    for (const auto& verdict : manifest.checks) {
        json entry;
        entry["name"] = verdict.name;
        entry["status"] = verdict.status;
        entry["detail"] = verdict.detail;
        entry["wallclock_ms"] = verdict.wallclock_ms;
        j["checks"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

}  // namespace ergo
