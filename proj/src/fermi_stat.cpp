// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include "megstat/fermi_stat.hpp"

#include <cmath>
#include <string>

namespace megstat::fermi {

namespace {

constexpr double kMeanTolerance = 1e-6;
constexpr int kMaxExpansions = 64;
constexpr int kMaxBisections = 200;
constexpr double kLogCouplingWidth = 1e-13;

double mean_at_log_coupling(double log_g, double energy_ratio) {
    return moments(multiplicity_distribution(
                       ReducedStatParams(std::exp(log_g), energy_ratio)))
        .mean;
}

}  // namespace

double log_stat_weight(int n, const ReducedStatParams& params) {
    if (n < 2 || n % 2 != 0)
        fail(ErrorCode::DomainError, "carrier count must be even and >= 2, got " + std::to_string(n));
    const double excess = params.energy_ratio() - 0.5 * n;
    if (!(excess > 0.0))
        fail(ErrorCode::DomainError, "channel n=" + std::to_string(n) + " is energetically closed");
    const double half3n = 1.5 * n;
    return n * std::log(params.coupling()) + (half3n - 1.0) * std::log(excess)
           - log_gamma(half3n);
}

std::vector<int> open_channels(double energy_ratio) {
    std::vector<int> channels;
    for (int n = 2; energy_ratio - 0.5 * n > 0.0; n += 2) channels.push_back(n);
    return channels;
}

DiscreteDistribution multiplicity_distribution(const ReducedStatParams& params) {
    std::vector<int> support = open_channels(params.energy_ratio());
    if (support.empty())
        fail(ErrorCode::NoChannel, "no open channel: energy ratio must exceed 1");
    std::vector<double> logw;
    logw.reserve(support.size());
    for (int n : support) logw.push_back(log_stat_weight(n, params));
    return DiscreteDistribution::from_log_weights(std::move(support), std::move(logw));
}

double exciton_yield(const DiscreteDistribution& d) { return 0.5 * moments(d).mean; }

CalibrationResult calibrate_coupling(double energy_ratio, double target_mean) {
    if (!std::isfinite(energy_ratio) || energy_ratio <= 1.0)
        fail(ErrorCode::NoChannel, "no open channel: energy ratio must exceed 1");
    if (energy_ratio <= 2.0)
        fail(ErrorCode::DegenerateChannel, "only the n=2 channel is open; the mean is fixed at 2");
    const int n_max = open_channels(energy_ratio).back();
    if (!(target_mean > 2.0 && target_mean < n_max))
        fail(ErrorCode::Unreachable, "target mean must lie in (2, " + std::to_string(n_max) + ")");

    auto residual = [&](double log_g) {
        return mean_at_log_coupling(log_g, energy_ratio) - target_mean;
    };

    double lo = -1.0;
    double hi = 1.0;
    double width = hi - lo;
    int expansions = 0;
    while (residual(lo) > 0.0) {
        if (++expansions > kMaxExpansions) fail(ErrorCode::Unreachable, "bracket expansion failed");
        width *= 2.0;
        lo = hi - width;
    }
    while (residual(hi) < 0.0) {
        if (++expansions > kMaxExpansions) fail(ErrorCode::Unreachable, "bracket expansion failed");
        width *= 2.0;
        hi = lo + width;
    }

    int it = 0;
    while (hi - lo > kLogCouplingWidth && it < kMaxBisections) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) lo = mid; else hi = mid;
        ++it;
    }
    const double log_g = 0.5 * (lo + hi);
    const double achieved = mean_at_log_coupling(log_g, energy_ratio);
    if (std::abs(achieved - target_mean) > kMeanTolerance)
        fail(ErrorCode::Unreachable, "bisection did not reach the mean tolerance");

    CalibrationResult result;
    result.coupling = std::exp(log_g);
    result.achieved_mean = achieved;
    result.iterations = it;
    result.bracket_lower = std::exp(lo);
    result.bracket_upper = std::exp(hi);
    return result;
}

std::vector<DeviationPoint> deviation_scan(double coupling,
                                           std::span<const double> energy_grid) {
    std::vector<DeviationPoint> out;
    out.reserve(energy_grid.size());
    for (double eps : energy_grid) {
        if (!(eps > 1.0)) fail(ErrorCode::NoChannel, "grid energy ratio must exceed 1");
        const auto d = multiplicity_distribution(ReducedStatParams(coupling, eps));
        out.push_back({eps, moments(d).poisson_deviation});
    }
    return out;
}

}  // namespace megstat::fermi
