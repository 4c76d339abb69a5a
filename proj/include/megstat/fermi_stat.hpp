// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "megstat/core_model.hpp"

/// Statistical (phase-space) theory of multiple exciton generation. A photon
/// of energy eps * Eg produces n carriers (electrons plus holes, n even) with
/// weight proportional to
///     g^n (eps - n/2)^(3n/2 - 1) / Gamma(3n/2),
/// for every even n >= 2 with eps - n/2 > 0.
namespace megstat::fermi {

struct CalibrationResult {
    double coupling = 0.0;
    double achieved_mean = 0.0;
    int iterations = 0;
    double bracket_lower = 0.0;  ///< g at the lower end of the final bracket
    double bracket_upper = 0.0;
};

struct DeviationPoint {
    double energy_ratio;
    double poisson_deviation;
};

/// ln S(n) up to an n-independent constant. Throws DomainError for odd n,
/// n < 2 or a closed channel (eps - n/2 <= 0).
double log_stat_weight(int n, const ReducedStatParams& params);

/// Even n >= 2 with eps - n/2 > 0, ascending. Empty when eps <= 1.
std::vector<int> open_channels(double energy_ratio);

/// Throws NoChannel when eps <= 1.
DiscreteDistribution multiplicity_distribution(const ReducedStatParams& params);

/// Mean number of excitons: half the mean carrier count.
double exciton_yield(const DiscreteDistribution& d);

/// Solves mean(g) = target_mean for g by bisection on ln g.
///
/// The mean carrier count is strictly increasing in ln g (its derivative is
/// the variance), so a bracket found by doubling its width always contains
/// the root. Throws DegenerateChannel for eps <= 2 and Unreachable when the
/// target lies outside (2, largest open n).
CalibrationResult calibrate_coupling(double energy_ratio, double target_mean);

/// Poisson deviation mean^2 + mean - <n^2> at each grid energy for fixed g.
std::vector<DeviationPoint> deviation_scan(double coupling,
                                           std::span<const double> energy_grid);

}  // namespace megstat::fermi
