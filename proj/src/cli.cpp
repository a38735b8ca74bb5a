#include "ergo/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ergo/decomposition.hpp"
#include "ergo/errors.hpp"
#include "ergo/instances.hpp"
#include "ergo/koopman.hpp"
#include "ergo/operators.hpp"
#include "ergo/serialize.hpp"
#include "ergo/splitmix.hpp"
#include "ergo/version.hpp"

namespace ergo {

namespace {

constexpr int kInstancesPerCheck = 10;

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled) {
        if (enabled_) start_ = std::chrono::steady_clock::now();
    }

    std::int64_t elapsed_ms() const {
        if (!enabled_) return 0;
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

std::string double_text(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string p_text(double p) {
    if (std::isinf(p)) return "inf";
    if (p == std::trunc(p) && std::abs(p) < 1e15) {
        return std::to_string(static_cast<long long>(p));
    }
    return double_text(p);
}

RunManifest base_manifest(const ExperimentConfig& config) {
    RunManifest manifest;
    manifest.config_hash = config_hash(config);
    manifest.version = kVersion;
    return manifest;
}

CommutingPair pair_from_config(const ExperimentConfig& config) {
    if (config.pair.empty()) throw ParseError("this command needs a \"pair\" in the config");
    return pair_from_text(config.pair);
}

FiniteSupportMeasure named_measure(const ExperimentConfig& config, const std::string& name,
                                   const GroupPtr& group) {
    const auto found = config.measures.find(name);
    if (found == config.measures.end()) {
        throw ParseError("config is missing measure \"" + name + "\"");
    }
    return measure_from_text(group, found->second);
}

std::vector<Rational> exact_observable(const ExperimentConfig& config, std::size_t atoms) {
    if (config.observable.empty()) throw ParseError("converge needs an observable");
    if (config.observable.size() != atoms) {
        throw ParseError("observable has " + std::to_string(config.observable.size()) +
                         " entries but the space has " + std::to_string(atoms) + " atoms");
    }
    std::vector<Rational> psi;
    psi.reserve(atoms);
    for (const auto& entry : config.observable) psi.push_back(rational_from_text(entry));
    return psi;
}

std::vector<double> rounded(const std::vector<Rational>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& value : values) out.push_back(to_double(value));
    return out;
}

// One deviation column per requested p, plus the shared clock and support
// columns.
struct SweepTable {
    std::vector<int> tau_values;
    std::vector<std::optional<std::size_t>> supports;
    std::vector<std::pair<double, std::vector<double>>> columns;  // (p, deviations)
};

SweepTable converge_pair_float(const CommutingPair& pair, const FiniteSupportMeasure& w,
                               const FiniteSupportMeasure& u, const EccentricitySchedule& tau,
                               const std::vector<double>& psi, const ExperimentConfig& config) {
    SweepTable table;
    for (double p : config.p_values) {
        auto rows = eccentric_deviation_sweep(pair, w, u, tau, psi, p, config.n_max,
                                              config.support_cap);
        std::vector<double> deviations;
        deviations.reserve(rows.size());
        for (const auto& row : rows) deviations.push_back(row.pair_deviation);
        if (table.columns.empty()) {
            for (const auto& row : rows) {
                table.tau_values.push_back(row.tau_n);
                table.supports.push_back(row.support_size);
            }
        }
        table.columns.emplace_back(p, std::move(deviations));
    }
    return table;
}

SweepTable converge_pair_exact(const CommutingPair& pair, const FiniteSupportMeasure& w,
                               const FiniteSupportMeasure& u, const EccentricitySchedule& tau,
                               const std::vector<Rational>& psi, const ExperimentConfig& config) {
    if (!is_ergodic(pair)) throw NotErgodic("eccentric averaging needs an ergodic pair");
    const FiniteProbabilitySpace& space = pair.space();
    const ExactMarkovMatrix left = exact_markov_operator(pair.left(), w);
    const ExactMarkovMatrix right = exact_markov_operator(pair.right(), u);
    const std::vector<Rational> mean = exact_integration_matrix(space).apply(psi);

    int tau_max = 1;
    std::set<int> needed;
    for (int n = 1; n <= config.n_max; ++n) {
        const int m = tau(n);
        needed.insert(m);
        tau_max = std::max(tau_max, m);
    }

    // The two walk operators commute, so the eccentric average factors as
    // L^n applied to a snapshot of R^m psi.
    std::map<int, std::vector<Rational>> right_applied;
    std::vector<Rational> current = psi;
    for (int m = 1; m <= tau_max; ++m) {
        current = right.apply(current);
        if (needed.contains(m)) right_applied.emplace(m, current);
    }

    auto left_supports = convolution_support_sizes(w, config.n_max, config.support_cap);
    auto right_supports = convolution_support_sizes(u, tau_max, config.support_cap);

    SweepTable table;
    table.columns.reserve(config.p_values.size());
    for (double p : config.p_values) table.columns.emplace_back(p, std::vector<double>{});

    for (int n = 1; n <= config.n_max; ++n) {
        const int m = tau(n);
        table.tau_values.push_back(m);
        const auto& ls = left_supports[static_cast<std::size_t>(n - 1)];
        const auto& rs = right_supports[static_cast<std::size_t>(m - 1)];
        table.supports.push_back(ls && rs ? std::optional(*ls * *rs) : std::nullopt);

        std::vector<Rational> averaged = right_applied.at(m);
        for (int step = 0; step < n; ++step) averaged = left.apply(averaged);
        std::vector<double> residual(space.atom_count());
        for (std::size_t x = 0; x < residual.size(); ++x) {
            residual[x] = to_double(averaged[x] - mean[x]);
        }
        for (auto& [p, deviations] : table.columns) {
            deviations.push_back(p_norm(space, residual, p));
        }
    }
    return table;
}

SweepTable converge_action(const PmpAction& action, const FiniteSupportMeasure& w,
                           const std::vector<Rational>& psi, const ExperimentConfig& config) {
    const FiniteProbabilitySpace& space = action.space();
    SweepTable table;
    for (int n = 1; n <= config.n_max; ++n) table.tau_values.push_back(n);
    table.supports = convolution_support_sizes(w, config.n_max, config.support_cap);

    if (config.mode == "float") {
        const std::vector<double> psi_double = rounded(psi);
        for (double p : config.p_values) {
            table.columns.emplace_back(
                p, convolution_deviation(action, w, psi_double, p, config.n_max));
        }
        return table;
    }

    const ExactMarkovMatrix step = exact_markov_operator(action, w);
    const std::vector<Rational> target =
        exact_conditional_expectation(space, invariant_partition(action)).apply(psi);
    for (double p : config.p_values) table.columns.emplace_back(p, std::vector<double>{});
    std::vector<Rational> current = psi;
    for (int n = 1; n <= config.n_max; ++n) {
        current = step.apply(current);
        std::vector<double> residual(space.atom_count());
        for (std::size_t x = 0; x < residual.size(); ++x) {
            residual[x] = to_double(current[x] - target[x]);
        }
        for (auto& [p, deviations] : table.columns) {
            deviations.push_back(p_norm(space, residual, p));
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Suite batteries.  Each check draws its instances from a stream forked off
// the seed by the check's name, so a verdict never depends on which other
// checks were selected.

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_instance(int instance, const std::string& why) {
    throw CheckFailure("instance " + std::to_string(instance) + ": " + why);
}

CommutingPair draw_pair(SplitMix64& rng, const SuiteHooks& hooks) {
    CommutingPair pair = random_ergodic_pair(rng, 8, 48);
    if (!hooks.break_pairs) return pair;
    auto images = pair.left().generator_images();
    auto moved = images.front().images();
    std::swap(moved[0], moved[1]);
    images.front() = Automorphism(std::move(moved));
    PmpAction broken =
        PmpAction::unchecked(pair.left().group(), pair.left().space(), std::move(images));
    return CommutingPair::unchecked(std::move(broken), pair.right());
}

void conv_product_battery(SplitMix64& rng, const SuiteHooks&) {
    const auto f2 = GroupDescriptor::free_group(2);
    const auto z6 = GroupDescriptor::cyclic(6);
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto w = random_rational_measure(inst, f2);
        const auto u = random_rational_measure(inst, z6);
        const auto joint = product_measure(w, u);
        for (int n = 1; n <= 3; ++n) {
            const auto convolved = autoconvolve(joint, n);
            const auto assembled = product_measure(autoconvolve(w, n), autoconvolve(u, n));
            if (!(convolved.weights() == assembled.weights())) {
                fail_instance(i, "power " + std::to_string(n) +
                                     " of a product measure is not the product of powers");
            }
        }
    }
}

void independence_battery(SplitMix64& rng, const SuiteHooks& hooks) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto pair = draw_pair(inst, hooks);
        if (!synergodic_decomposition(pair).independence) {
            fail_instance(i, "the two component algebras are correlated");
        }
    }
}

void canonical_factor_battery(SplitMix64& rng, const SuiteHooks& hooks) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto report = verify_canonical_factorization(draw_pair(inst, hooks));
        if (!report.passed()) fail_instance(i, report.violations.front());
    }
}

void local_product_battery(SplitMix64& rng, const SuiteHooks&) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto a = random_ergodic_action(inst, 2 + inst.below(11));
        const auto b = random_ergodic_action(inst, 2 + inst.below(11));
        const auto report = verify_local_product_structure(a, b);
        if (!report.passed()) fail_instance(i, report.violations.front());
    }
}

void expectation_product_battery(SplitMix64& rng, const SuiteHooks& hooks) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        if (!check_expectation_product(draw_pair(inst, hooks))) {
            fail_instance(i, "composed block projections differ from integration");
        }
    }
}

void cube_battery(SplitMix64& rng, const SuiteHooks&) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto x1 = random_weighted_space(inst, 6);
        const auto x2 = random_weighted_space(inst, 6);
        const auto x3 = random_weighted_space(inst, 6);
        if (!check_cube_expectations(x1, x2, x3)) {
            fail_instance(i, "coordinate projections do not compose to integration");
        }
    }
}

void freeness_battery(SplitMix64& rng, const SuiteHooks&) {
    for (int i = 0; i < kInstancesPerCheck; ++i) {
        SplitMix64 inst = rng.fork(static_cast<std::uint64_t>(i));
        const auto a = random_free_finite_action(inst);
        const auto b = random_free_finite_action(inst);
        const auto joint = local_product(a, b);
        if (!is_free(joint.as_product_action()).free) {
            fail_instance(i, "local product of free actions has a stabilizer");
        }
        // A free group never acts freely on finitely many atoms; the
        // returned witness must move nothing.
        const std::size_t atoms = 2 + inst.below(7);
        PmpAction crystal(GroupDescriptor::free_group(1), FiniteProbabilitySpace::uniform(atoms),
                          {random_permutation(inst, atoms)});
        const auto verdict = is_free(crystal);
        if (verdict.free) fail_instance(i, "free-group action reported free on finite atoms");
        if (!verdict.witness) fail_instance(i, "missing freeness witness");
        const GroupElement& witness = *verdict.witness;
        const bool witness_trivial = crystal.automorphism(witness).images() ==
                                     Automorphism::identity(atoms).images();
        if (!witness_trivial || witness == GroupElement::identity(crystal.group())) {
            fail_instance(i, "freeness witness does not act trivially");
        }
    }
}

using Battery = std::function<void(SplitMix64&, const SuiteHooks&)>;

const std::map<std::string, Battery>& batteries() {
    static const std::map<std::string, Battery> all = {
        {"conv-product", conv_product_battery},
        {"independence", independence_battery},
        {"canonical-factor", canonical_factor_battery},
        {"local-product", local_product_battery},
        {"expectation-product", expectation_product_battery},
        {"cube", cube_battery},
        {"freeness", freeness_battery},
    };
    return all;
}

}  // namespace

const std::vector<std::string>& suite_check_names() {
    static const std::vector<std::string> names = {
        "conv-product",  "independence", "canonical-factor", "local-product",
        "expectation-product", "cube",   "freeness",
    };
    return names;
}

CommandResult run_validate(const ExperimentConfig& config) {
    CommandResult result;
    result.manifest = base_manifest(config);
    const Stopwatch watch(config.timings);
    CheckVerdict verdict{"validate", "pass", "", 0};
    try {
        ValidationReport report;
        std::string subject;
        if (!config.pair.empty()) {
            report = validate(pair_from_text(config.pair));
            subject = "pair";
        } else if (!config.action.empty()) {
            report = validate(action_from_text(config.action));
            subject = "action";
        } else {
            throw ParseError("validate needs a \"pair\" or an \"action\" in the config");
        }
        if (report.ok()) {
            result.output = subject + ": valid\n";
        } else {
            std::ostringstream out;
            out << subject << ": invalid\n";
            for (const auto& violation : report.violations) out << violation << '\n';
            result.output = out.str();
            result.error = report.violations.front() + "\n";
            result.exit_code = 2;
            verdict.status = "fail";
            verdict.detail = report.violations.front();
        }
    } catch (const ParseError&) {
        throw;
    } catch (const ErgoError& error) {
        // Semantic violation caught during construction; the message is the
        // witness.
        result.output = std::string("invalid\n") + error.what() + "\n";
        result.error = std::string(error.what()) + "\n";
        result.exit_code = 2;
        verdict.status = "fail";
        verdict.detail = error.what();
    }
    verdict.wallclock_ms = watch.elapsed_ms();
    result.manifest.checks.push_back(std::move(verdict));
    return result;
}

CommandResult run_decompose(const ExperimentConfig& config) {
    CommandResult result;
    result.manifest = base_manifest(config);
    const Stopwatch watch(config.timings);
    const CommutingPair pair = pair_from_config(config);
    const SynergodicReport report = synergodic_decomposition(pair);
    result.output = render_synergodic_report(report);
    result.manifest.checks.push_back({"decompose", "pass",
                                      report.synergodic ? "synergodic" : "not synergodic",
                                      watch.elapsed_ms()});
    return result;
}

CommandResult run_independence(const ExperimentConfig& config) {
    CommandResult result;
    result.manifest = base_manifest(config);
    const Stopwatch watch(config.timings);
    const CommutingPair pair = pair_from_config(config);
    const SynergodicReport report = synergodic_decomposition(pair);
    CheckVerdict verdict{"independence", "pass", "", 0};
    if (report.independence) {
        result.output = "independent: true\n";
    } else {
        const FiniteProbabilitySpace& space = pair.space();
        const std::size_t nb = report.part_b.block_count();
        std::vector<Rational> mass_a(report.part_a.block_count(), Rational(0));
        std::vector<Rational> mass_b(nb, Rational(0));
        for (std::size_t x = 0; x < space.atom_count(); ++x) {
            mass_a[static_cast<std::size_t>(report.part_a.block_of(x))] += space.weight(x);
            mass_b[static_cast<std::size_t>(report.part_b.block_of(x))] += space.weight(x);
        }
        std::string witness;
        for (std::size_t a = 0; a < mass_a.size() && witness.empty(); ++a) {
            for (std::size_t b = 0; b < nb && witness.empty(); ++b) {
                const Rational joint = report.pushforward[a * nb + b];
                const Rational split = mass_a[a] * mass_b[b];
                if (joint != split) {
                    witness = "blocks A" + std::to_string(a) + ", B" + std::to_string(b) +
                              ": joint mass " + rational_to_text(joint) + ", product " +
                              rational_to_text(split);
                }
            }
        }
        result.output = "independent: false\n" + witness + "\n";
        result.error = witness + "\n";
        result.exit_code = 2;
        verdict.status = "fail";
        verdict.detail = witness;
    }
    verdict.wallclock_ms = watch.elapsed_ms();
    result.manifest.checks.push_back(std::move(verdict));
    return result;
}

CommandResult run_converge(const ExperimentConfig& config) {
    CommandResult result;
    result.manifest = base_manifest(config);
    const Stopwatch watch(config.timings);
    const bool has_pair = !config.pair.empty();
    const bool has_action = !config.action.empty();
    if (has_pair == has_action) {
        throw ParseError("converge needs exactly one of \"pair\" or \"action\"");
    }
    const EccentricitySchedule tau = schedule_from_spec(config.schedule);

    SweepTable table;
    if (has_pair) {
        const CommutingPair pair = pair_from_text(config.pair);
        const auto w = named_measure(config, "left", pair.left().group());
        const auto u = named_measure(config, "right", pair.right().group());
        const auto psi = exact_observable(config, pair.space().atom_count());
        table = config.mode == "float"
                    ? converge_pair_float(pair, w, u, tau, rounded(psi), config)
                    : converge_pair_exact(pair, w, u, tau, psi, config);
    } else {
        const PmpAction action = action_from_text(config.action);
        const auto w = named_measure(config, "walk", action.group());
        const auto psi = exact_observable(config, action.space().atom_count());
        table = converge_action(action, w, psi, config);
    }

    const std::int64_t total_ms = watch.elapsed_ms();
    std::ostringstream csv;
    csv << "n,tau_n,support_size,p,deviation,wallclock_ms\n";
    for (int n = 1; n <= config.n_max; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - 1);
        for (const auto& [p, deviations] : table.columns) {
            csv << n << ',' << table.tau_values[i] << ',';
            if (table.supports[i]) {
                csv << *table.supports[i];
            } else {
                csv << "cap_exceeded";
            }
            csv << ',' << p_text(p) << ',' << double_text(deviations[i]) << ',' << total_ms
                << '\n';
        }
    }
    for (const auto& [p, deviations] : table.columns) {
        const auto crossing = first_crossing(deviations, config.threshold);
        CheckVerdict verdict{"converge p=" + p_text(p), "pass", "", total_ms};
        if (crossing) {
            csv << "# p=" << p_text(p) << " first_crossing_n=" << *crossing << '\n';
            verdict.detail = "first_crossing_n=" + std::to_string(*crossing);
        } else {
            const std::string residual = double_text(deviations.back());
            csv << "# p=" << p_text(p) << " DidNotConverge residual=" << residual << '\n';
            verdict.status = "fail";
            verdict.detail = "DidNotConverge residual=" + residual;
        }
        result.manifest.checks.push_back(std::move(verdict));
    }
    result.output = csv.str();
    return result;
}

CommandResult run_koopman_norm(const ExperimentConfig& config, const std::string& element_text) {
    CommandResult result;
    result.manifest = base_manifest(config);
    const Stopwatch watch(config.timings);
    if (config.action.empty()) throw ParseError("koopman-norm needs an \"action\" in the config");
    const PmpAction action = action_from_text(config.action);
    const GroupRingElement phi = ring_element_from_text(action.group(), element_text);
    const OperatorNormResult norm = operator_norm_details(evaluate(action, phi));

    nlohmann::json document;
    document["norm"] = norm.value;
    document["iterations"] = norm.iterations;
    document["converged"] = norm.converged;
    result.output = document.dump(2) + "\n";

    CheckVerdict verdict{"koopman-norm", "pass", "", watch.elapsed_ms()};
    if (!norm.converged) {
        result.exit_code = 70;
        result.error = "power iteration hit the iteration cap\n";
        verdict.status = "fail";
        verdict.detail = "power iteration hit the iteration cap";
    }
    result.manifest.checks.push_back(std::move(verdict));
    return result;
}

CommandResult run_suite(const ExperimentConfig& config, const SuiteHooks& hooks) {
    CommandResult result;
    result.manifest = base_manifest(config);
    for (const auto& name : config.checks) {
        if (!batteries().contains(name)) throw ParseError("unknown check: " + name);
    }
    const std::set<std::string> requested(config.checks.begin(), config.checks.end());

    std::ostringstream out;
    bool failed = false;
    for (const auto& name : suite_check_names()) {
        CheckVerdict verdict{name, "pass", std::to_string(kInstancesPerCheck) + " instances", 0};
        if (config.checks.empty()) {
            verdict.status = "skipped";
            verdict.detail = "empty battery";
        } else if (!requested.contains(name)) {
            verdict.status = "skipped";
            verdict.detail = "not selected";
        } else {
            const Stopwatch watch(config.timings);
            try {
                // A fresh stream per check keeps every battery independent
                // of which other checks were selected.
                SplitMix64 stream =
                    SplitMix64(config.seed).fork(fnv1a64(name.data(), name.size()));
                batteries().at(name)(stream, hooks);
            } catch (const CheckFailure& failure) {
                verdict.status = "fail";
                verdict.detail = failure.what();
            } catch (const ErgoError& error) {
                verdict.status = "fail";
                verdict.detail = error.what();
            }
            verdict.wallclock_ms = watch.elapsed_ms();
        }
        if (verdict.status == "fail") {
            failed = true;
            result.error += name + ": " + verdict.detail + "\n";
        }
        out << name << ": " << verdict.status;
        if (!verdict.detail.empty()) out << " (" << verdict.detail << ")";
        out << '\n';
        result.manifest.checks.push_back(std::move(verdict));
    }
    out << "suite: " << (failed ? "fail" : "pass") << '\n';
    result.output = out.str();
    result.exit_code = failed ? 2 : 0;
    return result;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + temp.string());
    }
    fs::rename(temp, target);
}

}  // namespace ergo
