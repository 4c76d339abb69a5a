// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "megstat/cli.hpp"

namespace megstat::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything the flags bind to; folded into a RunConfig after parsing.
struct RawArgs {
    RunConfig cfg;
    std::string config_path;
    std::string format;
    std::optional<double> epsilon, g, target_mean;
    std::optional<double> mass, radius, gap, photon, hbar;
    std::optional<std::uint64_t> seed;
};

const std::map<std::string, Mode>& mode_table() {
    static const std::map<std::string, Mode> table{
        {"stat", Mode::Stat},
        {"calibrate", Mode::Calibrate},
        {"stationary", Mode::Stationary},
        {"extrema", Mode::Extrema},
        {"evolve", Mode::Evolve},
        {"ssa", Mode::Ssa},
        {"reproduce", Mode::Reproduce},
    };
    return table;
}

void add_output_options(CLI::App& sub, RawArgs& raw) {
    sub.add_option("--config", raw.config_path, "JSON file supplying defaults for any flag");
    sub.add_option("--output,-o", raw.cfg.output, "Output file (default: standard output)");
    sub.add_option("--format", raw.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_kinetic_options(CLI::App& sub, RawArgs& raw) {
    auto& k = raw.cfg.kinetic;
    sub.add_option("--k1A", k.k1A, "k1*A, autocatalytic generation rate");
    sub.add_option("--km1", k.km1, "k_-1, impact recombination rate");
    sub.add_option("--k2", k.k2, "k2, single-exciton annihilation rate");
    sub.add_option("--km2AV", k.km2AV, "k_-2*A*V, single-exciton generation rate");
    sub.add_option("--V", k.V, "dot volume");
}

std::unique_ptr<CLI::App> build_app(RawArgs& raw) {
    auto app = std::make_unique<CLI::App>(
        "Exciton multiplicity statistics: phase-space theory and birth-death master equation",
        "megstat");
    app->require_subcommand(1);
    app->fallthrough(false);

    auto* stat = app->add_subcommand("stat", "Multiplicity distribution from (g, epsilon) or physical inputs");
    add_output_options(*stat, raw);
    stat->add_option("--epsilon", raw.epsilon, "photon energy over effective gap");
    stat->add_option("--g", raw.g, "phase-space coupling");
    stat->add_option("--mass", raw.mass, "carrier mass");
    stat->add_option("--radius", raw.radius, "dot radius");
    stat->add_option("--gap", raw.gap, "effective gap energy");
    stat->add_option("--photon", raw.photon, "photon energy");
    stat->add_option("--hbar", raw.hbar, "reduced Planck constant in the same units");

    auto* calibrate = app->add_subcommand("calibrate", "Find g giving a target mean carrier count");
    add_output_options(*calibrate, raw);
    calibrate->add_option("--epsilon", raw.epsilon, "photon energy over effective gap");
    calibrate->add_option("--target-mean", raw.target_mean, "target mean carrier count");

    for (const char* name : {"stationary", "extrema"}) {
        auto* sub = app->add_subcommand(name, std::string(name) == "stationary"
                                                  ? "Exact stationary law of the master equation"
                                                  : "Extrema and bimodality of the stationary law");
        add_output_options(*sub, raw);
        add_kinetic_options(*sub, raw);
        sub->add_option("--tail-tol", raw.cfg.tail_tol, "truncation bound on the neglected tail");
    }

    auto* evolve = app->add_subcommand("evolve", "Transient solution of the master equation");
    add_output_options(*evolve, raw);
    add_kinetic_options(*evolve, raw);
    evolve->add_option("--n-max", raw.cfg.n_max, "largest lattice state")->required();
    evolve->add_option("--n0", raw.cfg.n0, "initial state (point mass)");
    evolve->add_option("--times", raw.cfg.times, "output times, comma separated")
        ->delimiter(',')
        ->required();

    auto* ssa = app->add_subcommand("ssa", "Stochastic simulation estimate of the stationary law");
    add_output_options(*ssa, raw);
    add_kinetic_options(*ssa, raw);
    ssa->add_option("--seed", raw.seed, "base seed (replica r uses seed + r)");
    ssa->add_option("--events", raw.cfg.events, "events per replica");
    ssa->add_option("--burn-in", raw.cfg.burn_in, "fraction of events discarded");
    ssa->add_option("--replicas", raw.cfg.replicas, "independent replicas");
    ssa->add_option("--threads", raw.cfg.threads, "worker threads");
    ssa->add_option("--tail-tol", raw.cfg.tail_tol, "tail bound for the analytic comparison law");

    auto* reproduce = app->add_subcommand("reproduce", "Reproduce the published PbSe moments");
    add_output_options(*reproduce, raw);
    reproduce->add_option("--case", raw.cfg.reproduce_case, "pbse-3.63 or pbse-4.9")->required();

    return app;
}

std::vector<std::string> json_to_args(const std::string& key, const json& value) {
    auto scalar = [&](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number() || v.is_boolean()) return v.dump();
        throw UsageError("config key '" + key + "' has an unsupported value type");
    };
    std::vector<std::string> out{"--" + key};
    if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
        out.push_back(joined);
    } else {
        out.push_back(scalar(value));
    }
    return out;
}

// Returns the argument list with config-file values inserted for every flag
// not already present on the command line.
std::vector<std::string> merge_config(const CLI::App& sub, const std::string& path,
                                      const std::vector<std::string>& args) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");

    std::vector<std::string> merged{args.front()};
    for (const auto& [key, value] : doc.items()) {
        if (key == "mode") {
            if (!value.is_string() || value.get<std::string>() != sub.get_name())
                throw UsageError("config key 'mode' does not match subcommand '" + sub.get_name() + "'");
            continue;
        }
        const CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw UsageError("unknown config key '" + key + "' for mode " + sub.get_name());
        if (opt->count() > 0) continue;
        for (auto& a : json_to_args(key, value)) merged.push_back(std::move(a));
    }
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

void parse_into(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
}

void require_positive(const char* name, double v) {
    if (!(v > 0.0)) throw UsageError(std::string(name) + " must be positive");
}

void require_non_negative(const char* name, double v) {
    if (!(v >= 0.0)) throw UsageError(std::string(name) + " must be non-negative");
}

RunConfig finalize(RawArgs& raw, const std::string& mode) {
    RunConfig cfg = raw.cfg;
    cfg.mode = mode_table().at(mode);
    cfg.seed = raw.seed;
    cfg.epsilon = raw.epsilon;
    cfg.g = raw.g;
    cfg.target_mean = raw.target_mean;
    if (raw.format.empty()) {
        cfg.format = cfg.mode == Mode::Reproduce ? Format::Json : Format::Csv;
    } else {
        cfg.format = raw.format == "json" ? Format::Json : Format::Csv;
    }

    if (cfg.epsilon && !(*cfg.epsilon > 1.0)) throw UsageError("epsilon must exceed 1");
    if (cfg.g) require_positive("g", *cfg.g);

    switch (cfg.mode) {
        case Mode::Stat: {
            const bool any_physical = raw.mass || raw.radius || raw.gap || raw.photon || raw.hbar;
            if (any_physical) {
                if (cfg.epsilon || cfg.g)
                    throw UsageError("give either --epsilon/--g or physical parameters, not both");
                if (!(raw.mass && raw.radius && raw.gap && raw.photon && raw.hbar))
                    throw UsageError("physical input needs --mass, --radius, --gap, --photon and --hbar");
                for (auto [name, v] : {std::pair{"mass", *raw.mass}, {"radius", *raw.radius},
                                       {"gap", *raw.gap}, {"photon", *raw.photon},
                                       {"hbar", *raw.hbar}})
                    require_positive(name, v);
                if (*raw.photon <= *raw.gap) throw UsageError("photon energy must exceed the gap");
                cfg.physical = PhysicalParams{*raw.mass, *raw.radius, *raw.gap, *raw.photon, *raw.hbar};
            } else if (!(cfg.epsilon && cfg.g)) {
                throw UsageError("stat needs --epsilon and --g (or physical parameters)");
            }
            break;
        }
        case Mode::Calibrate:
            if (!(cfg.epsilon && cfg.target_mean))
                throw UsageError("calibrate needs --epsilon and --target-mean");
            break;
        case Mode::Stationary:
        case Mode::Extrema:
        case Mode::Evolve:
        case Mode::Ssa: {
            const auto& k = cfg.kinetic;
            require_non_negative("k1A", k.k1A);
            require_non_negative("km1", k.km1);
            require_non_negative("k2", k.k2);
            require_non_negative("km2AV", k.km2AV);
            require_positive("V", k.V);
            if (!(cfg.tail_tol > 0.0 && cfg.tail_tol <= 1e-3))
                throw UsageError("tail-tol must lie in (0, 1e-3]");
            if (cfg.mode == Mode::Evolve) {
                if (cfg.n_max < 1) throw UsageError("n-max must be at least 1");
                if (cfg.n0 < 0 || cfg.n0 > cfg.n_max) throw UsageError("n0 must lie in [0, n-max]");
                double prev = 0.0;
                for (double t : cfg.times) {
                    if (!(t >= prev)) throw UsageError("times must be non-negative and non-decreasing");
                    prev = t;
                }
            }
            if (cfg.mode == Mode::Ssa) {
                if (cfg.events < 10'000) throw UsageError("events must be at least 10000");
                if (!(cfg.burn_in >= 0.0 && cfg.burn_in <= 0.5))
                    throw UsageError("burn-in must lie in [0, 0.5]");
                if (cfg.replicas < 1) throw UsageError("replicas must be at least 1");
                if (cfg.threads < 1) throw UsageError("threads must be at least 1");
                if (!cfg.seed) cfg.seed = 1;
            }
            break;
        }
        case Mode::Reproduce: {
            const auto known = reproduction_cases();
            if (std::find(known.begin(), known.end(), cfg.reproduce_case) == known.end())
                throw UsageError("unknown case '" + cfg.reproduce_case + "'");
            break;
        }
    }
    return cfg;
}

}  // namespace

std::string_view mode_name(Mode mode) noexcept {
    for (const auto& [name, m] : mode_table()) {
        if (m == mode) return name;
    }
    return "?";
}

ParseResult parse_config(const std::vector<std::string>& args) {
    ParseResult result;
    {
        RawArgs probe;
        auto app = build_app(probe);
        if (args.empty()) {
            result.exit_code = kExitUsage;
            result.message = app->help();
            return result;
        }
        try {
            parse_into(*app, args);
            CLI::App* sub = app->get_subcommands().front();
            std::vector<std::string> effective = args;
            if (!probe.config_path.empty()) effective = merge_config(*sub, probe.config_path, args);

            RawArgs raw;
            auto final_app = build_app(raw);
            parse_into(*final_app, effective);
            result.config = finalize(raw, sub->get_name());
        } catch (const CLI::CallForHelp& e) {
            std::ostringstream help;
            result.exit_code = app->exit(e, help, help);
            result.message = help.str();
        } catch (const CLI::ParseError& e) {
            result.exit_code = kExitUsage;
            result.message = e.what();
        } catch (const UsageError& e) {
            result.exit_code = kExitUsage;
            result.message = e.what();
        }
    }
    return result;
}

}  // namespace megstat::cli
