#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "ergo/cli.hpp"
#include "ergo/config.hpp"
#include "ergo/errors.hpp"
#include "ergo/version.hpp"

namespace {

bool is_cap_error(const ergo::ErgoError& error) {
    return dynamic_cast<const ergo::SupportCapExceeded*>(&error) != nullptr ||
           dynamic_cast<const ergo::SizeCapExceeded*>(&error) != nullptr ||
           dynamic_cast<const ergo::IterationCapExceeded*>(&error) != nullptr ||
           dynamic_cast<const ergo::DimensionOverflow*>(&error) != nullptr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite measured group actions: validation, decomposition, convergence "
                 "sweeps, operator norms, and seeded verification suites"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string mode_override;
    std::string element_path;
    std::uint64_t seed_override = 0;
    double threshold_override = 0;
    int nmax_override = 0;

    auto* config_opt =
        app.add_option("--config", config_path, "experiment config (JSON document)");
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
    auto* out_opt =
        app.add_option("--out", out_path, "write the primary document here instead of stdout");
    auto* mode_opt = app.add_option("--mode", mode_override, "arithmetic mode for converge")
                         ->check(CLI::IsMember({"exact", "float"}));
    auto* threshold_opt =
        app.add_option("--threshold", threshold_override, "override the convergence threshold");
    auto* nmax_opt = app.add_option("--nmax", nmax_override, "override the sweep horizon");

    CLI::App* validate = app.add_subcommand("validate", "check an action or pair for violations");
    CLI::App* decompose = app.add_subcommand("decompose", "joint component structure of a pair");
    CLI::App* converge = app.add_subcommand("converge", "deviation sweep as CSV");
    CLI::App* independence =
        app.add_subcommand("independence", "exact block-independence verdict for a pair");
    CLI::App* koopman_norm =
        app.add_subcommand("koopman-norm", "operator norm of a group ring element");
    CLI::App* suite = app.add_subcommand("suite", "seeded exact property battery");
    koopman_norm->add_option("element", element_path, "group ring element file")->required();
    for (CLI::App* sub : {validate, decompose, converge, independence, koopman_norm, suite}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    std::string manifest_path;
    std::string command_name;
    try {
        if (config_opt->count() == 0) throw ergo::ParseError("--config is required");
        ergo::ExperimentConfig config =
            ergo::config_from_json(ergo::read_text_file(config_path));
        if (seed_opt->count() > 0) config.seed = seed_override;
        if (mode_opt->count() > 0) config.mode = mode_override;
        if (threshold_opt->count() > 0) {
            if (!(threshold_override > 0)) throw ergo::ParseError("threshold must be positive");
            config.threshold = threshold_override;
        }
        if (nmax_opt->count() > 0) {
            if (nmax_override < 1) throw ergo::ParseError("nmax must be at least 1");
            config.n_max = nmax_override;
        }
        manifest_path = config.out.manifest;

        ergo::CommandResult result;
        if (validate->parsed()) {
            command_name = "validate";
            result = ergo::run_validate(config);
        } else if (decompose->parsed()) {
            command_name = "decompose";
            result = ergo::run_decompose(config);
        } else if (converge->parsed()) {
            command_name = "converge";
            result = ergo::run_converge(config);
        } else if (independence->parsed()) {
            command_name = "independence";
            result = ergo::run_independence(config);
        } else if (koopman_norm->parsed()) {
            command_name = "koopman-norm";
            result = ergo::run_koopman_norm(config, ergo::read_text_file(element_path));
        } else {
            command_name = "suite";
            result = ergo::run_suite(config);
        }

        std::string destination = out_opt->count() > 0 ? out_path : std::string();
        if (destination.empty() && converge->parsed()) destination = config.out.csv;
        if (destination.empty()) {
            std::cout << result.output;
        } else {
            ergo::write_text_file_atomic(destination, result.output);
        }
        if (!manifest_path.empty()) {
            ergo::write_text_file_atomic(manifest_path,
                                         ergo::manifest_to_json(result.manifest));
        }
        if (!result.error.empty()) std::cerr << result.error;
        return result.exit_code;
    } catch (const ergo::ParseError& error) {
        std::cerr << "config error: " << error.what() << '\n';
        return 64;
    } catch (const ergo::ErgoError& error) {
        std::cerr << error.what() << '\n';
        const int code = is_cap_error(error) ? 70 : 2;
        if (!manifest_path.empty() && !command_name.empty()) {
            ergo::RunManifest manifest;
            manifest.version = ergo::kVersion;
            manifest.checks.push_back({command_name, "fail", error.what(), 0});
            try {
                ergo::write_text_file_atomic(manifest_path, ergo::manifest_to_json(manifest));
            } catch (...) {
            }
        }
        return code;
    } catch (const std::exception& error) {
        std::cerr << "internal error: " << error.what() << '\n';
        return 70;
    }
}
