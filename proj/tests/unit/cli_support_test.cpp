#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "ergo/actions.hpp"
#include "ergo/cli.hpp"
#include "ergo/config.hpp"
#include "ergo/errors.hpp"
#include "ergo/serialize.hpp"

using namespace ergo;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

PmpAction integer_rotation(std::size_t atoms) {
    std::vector<std::size_t> cycle(atoms);
    for (std::size_t i = 0; i < atoms; ++i) cycle[i] = i;
    return PmpAction(GroupDescriptor::free_group(1), FiniteProbabilitySpace::uniform(atoms),
                     {Automorphism::from_cycle(atoms, cycle)});
}

PmpAction cyclic_translation(int modulus) {
    const std::size_t atoms = static_cast<std::size_t>(modulus);
    std::vector<std::size_t> cycle(atoms);
    for (std::size_t i = 0; i < atoms; ++i) cycle[i] = i;
    return PmpAction(GroupDescriptor::cyclic(modulus), FiniteProbabilitySpace::uniform(atoms),
                     {Automorphism::from_cycle(atoms, cycle)});
}

std::string lazy_walk_text() { return "a1' 1/3\ne 1/3\na1 1/3\n"; }

// Extracts the residual following "# p=<p> DidNotConverge residual=".
double summary_residual(const std::string& csv, const std::string& p) {
    const std::string needle = "# p=" + p + " DidNotConverge residual=";
    const auto at = csv.find(needle);
    REQUIRE(at != std::string::npos);
    return std::stod(csv.substr(at + needle.size()));
}

std::vector<std::string> all_checks() { return suite_check_names(); }

}  // namespace

TEST_CASE("configs round trip through canonical JSON") {
    ExperimentConfig config;
    config.seed = 0xfeedfacecafe1234ull;
    config.mode = "float";
    config.pair = "pair\n...";
    config.action = "";
    config.measures = {{"left", "e 1\n"}, {"right", "0 1\n"}};
    config.observable = {"1/2", "-1/3", "0"};
    config.schedule.kind = "power";
    config.schedule.exponent = 3;
    config.p_values = {1.0, 2.0, kInf};
    config.n_max = 12;
    config.threshold = 1e-8;
    config.support_cap = 500;
    config.checks = {"cube", "freeness"};
    config.out.csv = "rows.csv";
    config.out.manifest = "manifest.json";
    config.timings = true;

    const std::string text = config_to_json(config);
    const ExperimentConfig back = config_from_json(text);
    REQUIRE(back == config);
    REQUIRE(config_to_json(back) == text);
    REQUIRE(config_hash(back) == config_hash(config));
    REQUIRE(std::isinf(back.p_values[2]));

    const ExperimentConfig defaults = config_from_json("{}");
    REQUIRE(defaults == ExperimentConfig{});
    REQUIRE(config_hash(defaults) != config_hash(config));
}

TEST_CASE("config parsing rejects malformed documents") {
    REQUIRE_THROWS_AS(config_from_json("not json"), ParseError);
    REQUIRE_THROWS_AS(config_from_json("[1,2]"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"surprise": 1})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"mode": "symbolic"})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"p_values": [0.5]})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"p_values": ["infinity"]})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"p_values": [true]})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"n_max": 0})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"threshold": 0})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"schedule": {"kind": "fibonacci"}})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"schedule": {"step": 2}})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"out": {"report": "x"}})"), ParseError);
    REQUIRE_THROWS_AS(config_from_json(R"({"seed": "42"})"), ParseError);
}

TEST_CASE("schedules map onto the sweep clocks") {
    ScheduleSpec spec;
    REQUIRE(schedule_from_spec(spec)(7) == 7);
    spec.kind = "power";
    spec.exponent = 2;
    REQUIRE(schedule_from_spec(spec)(5) == 25);
    spec.kind = "log";
    REQUIRE(schedule_from_spec(spec)(8) == 4);
    REQUIRE(schedule_from_spec(spec)(1) == 1);
    spec.kind = "table";
    spec.table = {3, 1, 4};
    REQUIRE(schedule_from_spec(spec)(2) == 1);
}

TEST_CASE("manifests render as hashed JSON documents") {
    RunManifest manifest;
    manifest.config_hash = 0xdeadbeefull;
    manifest.version = "0.1.0";
    manifest.checks.push_back({"cube", "pass", "10 instances", 0});
    manifest.checks.push_back({"freeness", "skipped", "not selected", 0});
    const std::string text = manifest_to_json(manifest);
    const auto parsed = nlohmann::json::parse(text);
    REQUIRE(parsed.at("config_hash").get<std::string>() == "00000000deadbeef");
    REQUIRE(parsed.at("version").get<std::string>() == "0.1.0");
    REQUIRE(parsed.at("checks").size() == 2);
    REQUIRE(parsed.at("checks")[0].at("status") == "pass");
    REQUIRE(parsed.at("checks")[1].at("detail") == "not selected");
    REQUIRE(parsed.at("checks")[0].at("wallclock_ms") == 0);
}

TEST_CASE("validate command reports verdicts with witnesses") {
    ExperimentConfig config;
    config.action = action_to_text(integer_rotation(4));
    const CommandResult valid = run_validate(config);
    REQUIRE(valid.exit_code == 0);
    REQUIRE(valid.output == "action: valid\n");
    REQUIRE(valid.manifest.checks.size() == 1);
    REQUIRE(valid.manifest.checks[0].status == "pass");
    REQUIRE(valid.manifest.version == std::string("0.1.0"));

    ExperimentConfig broken;
    broken.pair =
        "pair\natoms=3\n0 1/3\n1 1/3\n2 1/3\n"
        "action\ngroup free 1\n(0 1 2)\n"
        "action\ngroup free 1\n(0 1)\n";
    const CommandResult invalid = run_validate(broken);
    REQUIRE(invalid.exit_code == 2);
    REQUIRE(invalid.error.find("commute") != std::string::npos);
    REQUIRE(invalid.manifest.checks[0].status == "fail");

    ExperimentConfig empty;
    REQUIRE_THROWS_AS(run_validate(empty), ParseError);

    ExperimentConfig junk;
    junk.action = "action\ngroup free 1\natoms=two\n";
    REQUIRE_THROWS_AS(run_validate(junk), ParseError);
}

TEST_CASE("decompose command renders the joint structure") {
    const auto shifts = bernoulli_pair(GroupDescriptor::cyclic(2),
                                       FiniteProbabilitySpace::uniform(2));
    ExperimentConfig config;
    config.pair = pair_to_text(shifts.pair);
    const CommandResult result = run_decompose(config);
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.output.find("ergodic: false") != std::string::npos);
    REQUIRE(result.output.find("synergodic: false") != std::string::npos);
    REQUIRE(result.output.find("join: 3 blocks") != std::string::npos);
    REQUIRE(result.manifest.checks[0].detail == "not synergodic");

    ExperimentConfig product;
    product.pair = pair_to_text(local_product(integer_rotation(2), cyclic_translation(3)));
    const CommandResult synergodic = run_decompose(product);
    REQUIRE(synergodic.output.find("synergodic: true") != std::string::npos);
    REQUIRE(synergodic.manifest.checks[0].detail == "synergodic");
}

TEST_CASE("independence command produces exact verdicts") {
    ExperimentConfig config;
    config.pair = pair_to_text(local_product(integer_rotation(3), integer_rotation(4)));
    const CommandResult independent = run_independence(config);
    REQUIRE(independent.exit_code == 0);
    REQUIRE(independent.output == "independent: true\n");

    const auto lazy_group = GroupDescriptor::free_group(1);
    const auto idle = trivial_action(lazy_group, FiniteProbabilitySpace::uniform(2));
    ExperimentConfig correlated;
    correlated.pair = pair_to_text(CommutingPair(idle, idle));
    const CommandResult refused = run_independence(correlated);
    REQUIRE(refused.exit_code == 2);
    REQUIRE(refused.output.find("independent: false") != std::string::npos);
    REQUIRE(refused.error.find("joint mass 1/2") != std::string::npos);
    REQUIRE(refused.error.find("product 1/4") != std::string::npos);
    REQUIRE(refused.manifest.checks[0].status == "fail");
}

TEST_CASE("converge reports exact zeros for constant observables") {
    ExperimentConfig config;
    config.mode = "exact";
    config.action = action_to_text(integer_rotation(4));
    config.measures = {{"walk", lazy_walk_text()}};
    config.observable = {"3/7", "3/7", "3/7", "3/7"};
    config.p_values = {1.0, 2.0, kInf};
    config.n_max = 5;
    const CommandResult result = run_converge(config);
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.output.find("n,tau_n,support_size,p,deviation,wallclock_ms\n") == 0);
    REQUIRE(result.output.find("\n1,1,3,1,0,0\n") != std::string::npos);
    REQUIRE(result.output.find("\n5,5,11,inf,0,0\n") != std::string::npos);
    REQUIRE(result.output.find("# p=1 first_crossing_n=1\n") != std::string::npos);
    REQUIRE(result.output.find("# p=inf first_crossing_n=1\n") != std::string::npos);
    for (const auto& verdict : result.manifest.checks) REQUIRE(verdict.status == "pass");
}

TEST_CASE("converge flags walks that never leave their cosets") {
    // Supported on {2, 4} inside Z/6: the convolutions stay on the even
    // atoms, so the deviations flatten at the distance between the parity
    // average and the mean, here exactly 1/6 in every p-norm.
    const auto z6 = GroupDescriptor::cyclic(6);
    FiniteSupportMeasure::WeightMap half;
    half[GroupElement::finite(z6, 2)] = Rational(1, 2);
    half[GroupElement::finite(z6, 4)] = Rational(1, 2);

    ExperimentConfig config;
    config.mode = "exact";
    config.action = action_to_text(cyclic_translation(6));
    config.measures = {{"walk", measure_to_text(FiniteSupportMeasure(z6, half))}};
    config.observable = {"1", "0", "0", "0", "0", "0"};
    config.p_values = {1.0, 2.0, kInf};
    config.n_max = 40;
    const CommandResult exact = run_converge(config);
    REQUIRE(exact.exit_code == 0);
    for (const std::string p : {"1", "2", "inf"}) {
        REQUIRE(std::abs(summary_residual(exact.output, p) - 1.0 / 6.0) < 1e-9);
    }
    for (const auto& verdict : exact.manifest.checks) {
        REQUIRE(verdict.status == "fail");
        REQUIRE(verdict.detail.find("DidNotConverge") == 0);
    }

    config.mode = "float";
    const CommandResult rounded = run_converge(config);
    for (const std::string p : {"1", "2", "inf"}) {
        REQUIRE(std::abs(summary_residual(rounded.output, p) -
                         summary_residual(exact.output, p)) < 1e-9);
    }

    const CommandResult again = run_converge(config);
    REQUIRE(again.output == rounded.output);
}

TEST_CASE("converge sweeps eccentric pairs in both arithmetic modes") {
    ExperimentConfig config;
    config.mode = "float";
    config.pair = pair_to_text(local_product(integer_rotation(5), integer_rotation(4)));
    config.measures = {{"left", lazy_walk_text()}, {"right", lazy_walk_text()}};
    config.observable.assign(20, "0");
    config.observable[0] = "1";
    config.p_values = {2.0};
    config.n_max = 30;
    const CommandResult fast = run_converge(config);
    REQUIRE(fast.exit_code == 0);
    REQUIRE(fast.output.find("\n1,1,9,2,") != std::string::npos);
    REQUIRE(fast.output.find("# p=2 first_crossing_n=") != std::string::npos);

    config.mode = "exact";
    const CommandResult exact = run_converge(config);
    REQUIRE(exact.output.find("# p=2 first_crossing_n=") != std::string::npos);

    // Same rows up to roundoff: compare the n=30 deviation cells.
    const auto tail_of = [](const std::string& csv) {
        const auto at = csv.find("\n30,30,");
        REQUIRE(at != std::string::npos);
        const auto cell = csv.rfind(',', csv.find(",0\n", at) - 1);
        return std::stod(csv.substr(cell + 1));
    };
    REQUIRE(std::abs(tail_of(fast.output) - tail_of(exact.output)) < 1e-12);

    config.support_cap = 5;
    const CommandResult capped = run_converge(config);
    REQUIRE(capped.output.find("\n3,3,cap_exceeded,2,") != std::string::npos);

    ExperimentConfig confused;
    confused.pair = config.pair;
    confused.action = action_to_text(integer_rotation(4));
    REQUIRE_THROWS_AS(run_converge(confused), ParseError);
    ExperimentConfig missing;
    missing.pair = config.pair;
    missing.measures = {{"left", lazy_walk_text()}};
    missing.observable = config.observable;
    REQUIRE_THROWS_AS(run_converge(missing), ParseError);
}

TEST_CASE("koopman norm command emits JSON") {
    ExperimentConfig config;
    config.action = action_to_text(integer_rotation(3));
    const CommandResult result = run_koopman_norm(config, "e 1 0\na1 -1 0\n");
    REQUIRE(result.exit_code == 0);
    const auto parsed = nlohmann::json::parse(result.output);
    REQUIRE(parsed.at("converged").get<bool>());
    REQUIRE(parsed.at("iterations").get<int>() == 0);
    REQUIRE(std::abs(parsed.at("norm").get<double>() - std::sqrt(3.0)) < 1e-9);

    ExperimentConfig empty;
    REQUIRE_THROWS_AS(run_koopman_norm(empty, "e 1 0\n"), ParseError);
    REQUIRE_THROWS_AS(run_koopman_norm(config, "e one zero\n"), ParseError);
}

TEST_CASE("suite batteries pass, skip, and catch sabotage") {
    ExperimentConfig config;
    config.seed = 42;
    config.checks = all_checks();
    const CommandResult healthy = run_suite(config);
    REQUIRE(healthy.exit_code == 0);
    REQUIRE(healthy.output.find("suite: pass") != std::string::npos);
    REQUIRE(healthy.manifest.checks.size() == all_checks().size());
    for (const auto& verdict : healthy.manifest.checks) {
        REQUIRE(verdict.status == "pass");
        REQUIRE(verdict.detail == "10 instances");
    }

    const CommandResult repeat = run_suite(config);
    REQUIRE(repeat.output == healthy.output);
    REQUIRE(manifest_to_json(repeat.manifest) == manifest_to_json(healthy.manifest));

    SuiteHooks sabotage;
    sabotage.break_pairs = true;
    ExperimentConfig pairs_only = config;
    pairs_only.checks = {"independence", "canonical-factor", "expectation-product"};
    const CommandResult red = run_suite(pairs_only, sabotage);
    REQUIRE(red.exit_code == 2);
    REQUIRE(red.output.find("suite: fail") != std::string::npos);
    REQUIRE(!red.error.empty());

    ExperimentConfig idle = config;
    idle.checks.clear();
    const CommandResult skipped = run_suite(idle);
    REQUIRE(skipped.exit_code == 0);
    for (const auto& verdict : skipped.manifest.checks) {
        REQUIRE(verdict.status == "skipped");
        REQUIRE(verdict.detail == "empty battery");
    }

    ExperimentConfig subset = config;
    subset.checks = {"cube"};
    const CommandResult partial = run_suite(subset);
    REQUIRE(partial.exit_code == 0);
    REQUIRE(partial.output.find("cube: pass") != std::string::npos);
    REQUIRE(partial.output.find("freeness: skipped (not selected)") != std::string::npos);

    ExperimentConfig unknown = config;
    unknown.checks = {"telepathy"};
    REQUIRE_THROWS_AS(run_suite(unknown), ParseError);
}

TEST_CASE("text files write atomically and read back") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ergo_cli_test";
    fs::create_directories(dir);
    const std::string path = (dir / "payload.txt").string();
    write_text_file_atomic(path, "first\n");
    write_text_file_atomic(path, "second\n");
    REQUIRE(read_text_file(path) == "second\n");
    REQUIRE(!fs::exists(path + ".tmp"));
    fs::remove_all(dir);
    REQUIRE_THROWS_AS(read_text_file(path), ParseError);
}
