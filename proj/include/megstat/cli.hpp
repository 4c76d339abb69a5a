// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "megstat/core_model.hpp"
#include "megstat/fermi_stat.hpp"

namespace megstat::cli {

enum class Mode { Stat, Calibrate, Stationary, Extrema, Evolve, Ssa, Reproduce };
enum class Format { Csv, Json };

std::string_view mode_name(Mode mode) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Rate groups as given on the command line; A is folded into them.
struct KineticGroups {
    double k1A = 0.0;
    double km1 = 0.0;
    double k2 = 0.0;
    double km2AV = 0.0;
    double V = 1.0;

    KineticParams params() const { return KineticParams::from_groups(k1A, km1, k2, km2AV, V); }
};

struct RunConfig {
    Mode mode = Mode::Stat;
    Format format = Format::Csv;
    std::string output;  ///< empty writes to the standard output stream
    std::optional<std::uint64_t> seed;
    double tail_tol = 1e-12;

    // stat / calibrate
    std::optional<double> epsilon;
    std::optional<double> g;
    std::optional<double> target_mean;
    std::optional<PhysicalParams> physical;

    // stationary / extrema / evolve / ssa
    KineticGroups kinetic;

    // evolve
    int n_max = 0;
    int n0 = 0;
    std::vector<double> times;

    // ssa
    std::uint64_t events = 1'000'000;
    double burn_in = 0.1;
    int replicas = 1;
    int threads = 1;

    // reproduce
    std::string reproduce_case;
};

struct ParseResult {
    std::optional<RunConfig> config;  ///< set when parsing succeeded
    int exit_code = kExitOk;          ///< meaningful when config is empty
    std::string message;              ///< usage text or error description
};

/// Parses `<mode> [flags]` (program name excluded). `--config FILE` loads a
/// JSON object whose keys are the flag names without dashes; flags given on
/// the command line win over file values and unknown keys are rejected.
ParseResult parse_config(const std::vector<std::string>& args);

/// Executes a parsed configuration, writing the result to `config.output`
/// or `out`. Failures go to `err` as `ERROR <CODE>: <message>`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config followed by run, with the exit-code conventions applied.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

//---------------------------------------------------------------------------//
// Reproduction of the published PbSe moments.

struct ReproductionCheck {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;  ///< relative, or 0 for strict inequalities
    bool pass = false;
};

struct ReproductionReport {
    std::string case_name;
    double energy_ratio = 0.0;
    fermi::CalibrationResult calibration;
    DiscreteDistribution distribution = DiscreteDistribution::point_mass(2);
    MomentSummary moments;
    double reference_mean = 0.0;           ///< published mean at this energy
    double reference_second_moment = 0.0;  ///< published <n^2> at this energy
    std::vector<ReproductionCheck> checks;
    bool pass = false;
};

/// Known cases: "pbse-3.63" and "pbse-4.9". Both use the coupling calibrated
/// so the mean is 4.2 at eps = 3.63. Throws DomainError for other names.
ReproductionReport reproduce_case(std::string_view case_name);

std::vector<std::string> reproduction_cases();

}  // namespace megstat::cli
