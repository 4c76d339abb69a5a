// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>

#include "megstat/cli.hpp"
#include "megstat/fermi_stat.hpp"
#include "megstat/master_eq.hpp"
#include "megstat/ssa.hpp"
#include "report.hpp"

namespace megstat::cli {

namespace {

using detail::format_number;
using nlohmann::ordered_json;

using Footer = std::vector<std::pair<std::string, std::string>>;

void append(Footer& f, const Footer& more) { f.insert(f.end(), more.begin(), more.end()); }

ordered_json kinetic_json(const RunConfig& cfg) {
    const auto& k = cfg.kinetic;
    return {{"k1A", k.k1A}, {"km1", k.km1}, {"k2", k.k2}, {"km2AV", k.km2AV}, {"V", k.V},
            {"tail_tol", cfg.tail_tol}};
}

void emit_distribution(std::ostream& os, const RunConfig& cfg, const DiscreteDistribution& d,
                       ordered_json params, Footer extra, const detail::Provenance& prov) {
    if (cfg.format == Format::Json) {
        auto j = detail::distribution_json(d, std::move(params), prov);
        os << j.dump(2) << '\n';
        return;
    }
    Footer footer = detail::moments_footer(moments(d));
    append(footer, extra);
    append(footer, detail::provenance_footer(prov));
    detail::write_distribution_csv(os, d, footer);
}

void run_stat(const RunConfig& cfg, std::ostream& os) {
    const ReducedStatParams params = cfg.physical ? reduce_params(*cfg.physical)
                                                  : ReducedStatParams(*cfg.g, *cfg.epsilon);
    const auto d = fermi::multiplicity_distribution(params);
    emit_distribution(os, cfg, d, {{"g", params.coupling()}, {"epsilon", params.energy_ratio()}},
                      {}, {});
}

void run_calibrate(const RunConfig& cfg, std::ostream& os) {
    const auto cal = fermi::calibrate_coupling(*cfg.epsilon, *cfg.target_mean);
    const auto d = fermi::multiplicity_distribution(ReducedStatParams(cal.coupling, *cfg.epsilon));
    emit_distribution(os, cfg, d,
                      {{"epsilon", *cfg.epsilon},
                       {"target_mean", *cfg.target_mean},
                       {"g", cal.coupling},
                       {"achieved_mean", cal.achieved_mean},
                       {"iterations", cal.iterations},
                       {"bracket", {cal.bracket_lower, cal.bracket_upper}}},
                      {{"g", format_number(cal.coupling)},
                       {"achieved_mean", format_number(cal.achieved_mean)},
                       {"iterations", std::to_string(cal.iterations)}},
                      {});
}

void run_stationary(const RunConfig& cfg, std::ostream& os) {
    const auto res = master::stationary_distribution(cfg.kinetic.params(), cfg.tail_tol);
    auto params = kinetic_json(cfg);
    params["empty_chain"] = res.empty_chain;
    emit_distribution(os, cfg, res.distribution, std::move(params),
                      {{"empty_chain", res.empty_chain ? "true" : "false"}}, {});
}

void run_extrema(const RunConfig& cfg, std::ostream& os) {
    const auto rep = master::find_extrema(cfg.kinetic.params());
    if (cfg.format == Format::Json) {
        ordered_json j;
        j["continuous_roots"] = rep.continuous_roots;
        j["integer_maxima"] = rep.integer_maxima;
        j["integer_minima"] = rep.integer_minima;
        j["mode_count"] = rep.mode_count;
        j["is_bimodal"] = rep.is_bimodal;
        j["normalizable"] = rep.normalizable;
        j["printed_roots"] = rep.printed_roots;
        j["discrepancy_flag"] = rep.discrepancy_flag;
        j["params"] = kinetic_json(cfg);
        j["provenance"] = detail::provenance_json({});
        os << j.dump(2) << '\n';
        return;
    }
    os << "kind,value\n";
    for (double r : rep.continuous_roots) os << "continuous_root," << format_number(r) << '\n';
    for (double r : rep.printed_roots) os << "printed_root," << format_number(r) << '\n';
    for (int n : rep.integer_maxima) os << "integer_maximum," << n << '\n';
    for (int n : rep.integer_minima) os << "integer_minimum," << n << '\n';
    os << "# mode_count=" << rep.mode_count << '\n'
       << "# is_bimodal=" << (rep.is_bimodal ? "true" : "false") << '\n'
       << "# normalizable=" << (rep.normalizable ? "true" : "false") << '\n'
       << "# discrepancy_flag=" << (rep.discrepancy_flag ? "true" : "false") << '\n';
    for (const auto& [k, v] : detail::provenance_footer({})) os << "# " << k << '=' << v << '\n';
}

void run_evolve(const RunConfig& cfg, std::ostream& os) {
    const auto snaps = master::transient_evolve(
        cfg.kinetic.params(), DiscreteDistribution::point_mass(cfg.n0), cfg.times, cfg.n_max);
    if (cfg.format == Format::Json) {
        ordered_json j;
        ordered_json list = ordered_json::array();
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            list.push_back({{"t", cfg.times[i]},
                            {"support", std::vector<int>(snaps[i].support().begin(), snaps[i].support().end())},
                            {"probs", std::vector<double>(snaps[i].probs().begin(), snaps[i].probs().end())},
                            {"moments", detail::moments_json(moments(snaps[i]))}});
        }
        j["snapshots"] = std::move(list);
        auto params = kinetic_json(cfg);
        params.erase("tail_tol");
        params["n_max"] = cfg.n_max;
        params["n0"] = cfg.n0;
        j["params"] = std::move(params);
        j["provenance"] = detail::provenance_json({});
        os << j.dump(2) << '\n';
        return;
    }
    os << "t,n,probability\n";
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const auto t = format_number(cfg.times[i]);
        for (std::size_t k = 0; k < snaps[i].size(); ++k)
            os << t << ',' << snaps[i].support()[k] << ',' << format_number(snaps[i].probs()[k]) << '\n';
    }
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const auto m = moments(snaps[i]);
        os << "# t=" << format_number(cfg.times[i]) << ",mean=" << format_number(m.mean)
           << ",variance=" << format_number(m.variance) << '\n';
    }
    for (const auto& [k, v] : detail::provenance_footer({})) os << "# " << k << '=' << v << '\n';
}

void run_ssa(const RunConfig& cfg, std::ostream& os) {
    const auto kp = cfg.kinetic.params();
    const auto empirical = ssa::merged_stationary_histogram(kp, *cfg.seed, cfg.replicas, cfg.events,
                                                            cfg.burn_in, cfg.threads);
    const auto analytic = master::stationary_distribution(kp, cfg.tail_tol).distribution;
    const double tv = total_variation(empirical, analytic);
    auto params = kinetic_json(cfg);
    params["events"] = cfg.events;
    params["burn_in"] = cfg.burn_in;
    params["replicas"] = cfg.replicas;
    params["tv_to_stationary"] = tv;
    emit_distribution(os, cfg, empirical, std::move(params),
                      {{"events", std::to_string(cfg.events)},
                       {"replicas", std::to_string(cfg.replicas)},
                       {"tv_to_stationary", format_number(tv)}},
                      {cfg.seed, true});
}

bool run_reproduce(const RunConfig& cfg, std::ostream& os) {
    const auto rep = reproduce_case(cfg.reproduce_case);
    if (cfg.format == Format::Json) {
        os << detail::reproduction_json(rep).dump(2) << '\n';
    } else {
        Footer footer = detail::moments_footer(rep.moments);
        footer.emplace_back("g", format_number(rep.calibration.coupling));
        for (const auto& c : rep.checks) footer.emplace_back("check." + c.name, c.pass ? "pass" : "fail");
        footer.emplace_back("verdict", rep.pass ? "pass" : "fail");
        append(footer, detail::provenance_footer({}));
        detail::write_distribution_csv(os, rep.distribution, footer);
    }
    return rep.pass;
}

void print_error(std::ostream& err, std::string_view code, std::string_view message) {
    err << "ERROR " << code << ": " << message << '\n';
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    // Render into a buffer so a failed run leaves no partial output file.
    std::ostringstream buffer;
    bool verdict = true;
    try {
        switch (cfg.mode) {
            case Mode::Stat: run_stat(cfg, buffer); break;
            case Mode::Calibrate: run_calibrate(cfg, buffer); break;
            case Mode::Stationary: run_stationary(cfg, buffer); break;
            case Mode::Extrema: run_extrema(cfg, buffer); break;
            case Mode::Evolve: run_evolve(cfg, buffer); break;
            case Mode::Ssa: run_ssa(cfg, buffer); break;
            case Mode::Reproduce: verdict = run_reproduce(cfg, buffer); break;
        }
    } catch (const Error& e) {
        print_error(err, error_code_name(e.code()), e.what());
        return kExitDomain;
    }

    if (cfg.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        file << buffer.str();
        if (!file) {
            print_error(err, "IO_ERROR", "cannot write '" + cfg.output + "'");
            return kExitDomain;
        }
    }
    if (!verdict) {
        print_error(err, "REPRODUCTION_FAILED", "case " + cfg.reproduce_case + " missed a published target");
        return kExitDomain;
    }
    return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    ParseResult parsed = parse_config(args);
    if (!parsed.config) {
        if (parsed.exit_code == kExitOk) {
            out << parsed.message;
            return kExitOk;
        }
        if (args.empty()) {
            err << parsed.message;
            print_error(err, "USAGE", "a mode is required");
        } else {
            print_error(err, "USAGE", parsed.message);
        }
        return kExitUsage;
    }
    return run(*parsed.config, out, err);
}

}  // namespace megstat::cli
