// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "megstat/fermi_stat.hpp"
#include "megstat/ssa.hpp"

namespace megstat::cli {

namespace detail {

using nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ordered_json provenance_json(const Provenance& p) {
    ordered_json j;
    j["tool"] = "megstat";
    j["version"] = MEGSTAT_VERSION;
    j["seed"] = p.seed ? ordered_json(*p.seed) : ordered_json(nullptr);
    j["generator"] = p.randomized ? ordered_json(std::string(ssa::kGeneratorName))
                                  : ordered_json(nullptr);
    return j;
}

ordered_json moments_json(const MomentSummary& m) {
    ordered_json j;
    j["mean"] = m.mean;
    j["second_moment"] = m.second_moment;
    j["variance"] = m.variance;
    j["fano_factor"] = std::isfinite(m.fano_factor) ? ordered_json(m.fano_factor) : ordered_json(nullptr);
    j["poisson_deviation"] = m.poisson_deviation;
    j["exciton_yield"] = m.exciton_yield;
    return j;
}

std::vector<std::pair<std::string, std::string>> moments_footer(const MomentSummary& m) {
    return {
        {"mean", format_number(m.mean)},
        {"second_moment", format_number(m.second_moment)},
        {"variance", format_number(m.variance)},
        {"fano_factor", format_number(m.fano_factor)},
        {"poisson_deviation", format_number(m.poisson_deviation)},
        {"exciton_yield", format_number(m.exciton_yield)},
    };
}

std::vector<std::pair<std::string, std::string>> provenance_footer(const Provenance& p) {
    std::vector<std::pair<std::string, std::string>> lines{
        {"tool", std::string("megstat ") + MEGSTAT_VERSION}};
    if (p.seed) lines.emplace_back("seed", std::to_string(*p.seed));
    if (p.randomized) lines.emplace_back("generator", std::string(ssa::kGeneratorName));
    return lines;
}

void write_distribution_csv(std::ostream& os, const DiscreteDistribution& d,
                            const std::vector<std::pair<std::string, std::string>>& footer) {
    os << "n,probability\n";
    for (std::size_t i = 0; i < d.size(); ++i)
        os << d.support()[i] << ',' << format_number(d.probs()[i]) << '\n';
    for (const auto& [k, v] : footer) os << "# " << k << '=' << v << '\n';
}

ordered_json distribution_json(const DiscreteDistribution& d, ordered_json params,
                               const Provenance& p) {
    ordered_json j;
    j["support"] = std::vector<int>(d.support().begin(), d.support().end());
    j["probs"] = std::vector<double>(d.probs().begin(), d.probs().end());
    j["moments"] = moments_json(moments(d));
    j["params"] = std::move(params);
    j["provenance"] = provenance_json(p);
    return j;
}

ordered_json reproduction_json(const ReproductionReport& r) {
    ordered_json j;
    j["case"] = r.case_name;
    j["support"] = std::vector<int>(r.distribution.support().begin(), r.distribution.support().end());
    j["probs"] = std::vector<double>(r.distribution.probs().begin(), r.distribution.probs().end());
    j["moments"] = moments_json(r.moments);
    j["params"] = {{"epsilon", r.energy_ratio}, {"g", r.calibration.coupling}};
    j["calibration"] = {
        {"epsilon", 3.63},
        {"target_mean", 4.2},
        {"g", r.calibration.coupling},
        {"achieved_mean", r.calibration.achieved_mean},
        {"iterations", r.calibration.iterations},
        {"bracket", {r.calibration.bracket_lower, r.calibration.bracket_upper}},
    };
    j["reference"] = {{"mean", r.reference_mean}, {"second_moment", r.reference_second_moment}};
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"target", c.target},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    j["checks"] = std::move(checks);
    j["verdict"] = r.pass ? "pass" : "fail";
    j["provenance"] = provenance_json({});
    return j;
}

}  // namespace detail

//---------------------------------------------------------------------------//

namespace {

constexpr double kCalibrationEnergy = 3.63;
constexpr double kCalibrationMean = 4.2;

struct PublishedCase {
    const char* name;
    double energy_ratio;
    double mean;
    double second_moment;
    double mean_tolerance;           // relative; 0 means the mean is calibrated
    double second_moment_tolerance;  // relative
};

constexpr PublishedCase kCases[] = {
    {"pbse-3.63", 3.63, 4.2, 18.4, 0.0, 0.05},
    {"pbse-4.9", 4.9, 5.7, 33.46, 0.10, 0.10},
};

ReproductionCheck relative_check(std::string name, double value, double target, double tol) {
    return {std::move(name), value, target, tol, std::abs(value - target) <= tol * std::abs(target)};
}

double deviation_at(double g, double eps) {
    return moments(fermi::multiplicity_distribution(ReducedStatParams(g, eps))).poisson_deviation;
}

}  // namespace

std::vector<std::string> reproduction_cases() {
    std::vector<std::string> names;
    for (const auto& c : kCases) names.emplace_back(c.name);
    return names;
}

ReproductionReport reproduce_case(std::string_view case_name) {
    const PublishedCase* pc = nullptr;
    for (const auto& c : kCases) {
        if (case_name == c.name) pc = &c;
    }
    if (pc == nullptr) fail(ErrorCode::DomainError, "unknown reproduction case '" + std::string(case_name) + "'");

    ReproductionReport r;
    r.case_name = pc->name;
    r.energy_ratio = pc->energy_ratio;
    r.reference_mean = pc->mean;
    r.reference_second_moment = pc->second_moment;
    r.calibration = fermi::calibrate_coupling(kCalibrationEnergy, kCalibrationMean);
    const double g = r.calibration.coupling;
    r.distribution = fermi::multiplicity_distribution(ReducedStatParams(g, pc->energy_ratio));
    r.moments = moments(r.distribution);

    if (pc->mean_tolerance == 0.0) {
        r.checks.push_back({"calibrated_mean", r.calibration.achieved_mean, kCalibrationMean, 1e-6,
                            std::abs(r.calibration.achieved_mean - kCalibrationMean) <= 1e-6});
    } else {
        r.checks.push_back(relative_check("mean_relative", r.moments.mean, pc->mean, pc->mean_tolerance));
    }
    r.checks.push_back(relative_check("second_moment_relative", r.moments.second_moment,
                                      pc->second_moment, pc->second_moment_tolerance));
    r.checks.push_back({"sub_poissonian", r.moments.poisson_deviation, 0.0, 0.0,
                        r.moments.poisson_deviation > 0.0});
    if (pc->energy_ratio != kCalibrationEnergy) {
        const double base = deviation_at(g, kCalibrationEnergy);
        r.checks.push_back({"deviation_grows_with_energy", r.moments.poisson_deviation, base, 0.0,
                            r.moments.poisson_deviation > base});
    }
    r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.pass; });
    return r;
}

}  // namespace megstat::cli
