// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include "megstat/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <math.h>  // lgamma_r

namespace megstat {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DomainError: return "DOMAIN_ERROR";
        case ErrorCode::NoChannel: return "NO_CHANNEL";
        case ErrorCode::DegenerateChannel: return "DEGENERATE_CHANNEL";
        case ErrorCode::Unreachable: return "UNREACHABLE";
        case ErrorCode::NonNormalizable: return "NON_NORMALIZABLE";
        case ErrorCode::DegenerateDenominator: return "DEGENERATE_DENOMINATOR";
        case ErrorCode::NotApplicable: return "NOT_APPLICABLE";
        case ErrorCode::TruncationBreach: return "TRUNCATION_BREACH";
        case ErrorCode::StepFailure: return "STEP_FAILURE";
        case ErrorCode::FrozenChain: return "FROZEN_CHAIN";
    }
    return "UNKNOWN";
}

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double log_sum_exp(std::span<const double> x) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (x.empty()) return neg_inf;
    const double top = *std::max_element(x.begin(), x.end());
    if (top == neg_inf) return neg_inf;
    double sum = 0.0;
    for (double v : x) sum += std::exp(v - top);
    return top + std::log(sum);
}

//---------------------------------------------------------------------------//

ReducedStatParams::ReducedStatParams(double coupling, double energy_ratio)
    : coupling_(coupling), energy_ratio_(energy_ratio) {
    if (!(std::isfinite(coupling) && coupling > 0.0))
        fail(ErrorCode::DomainError, "coupling g must be positive and finite");
    if (!(std::isfinite(energy_ratio) && energy_ratio >= 1.0))
        fail(ErrorCode::DomainError, "energy ratio must be at least 1");
}

void KineticParams::validate() const {
    const double fields[] = {k1, k_m1, k2, k_m2, A, V};
    for (double f : fields) {
        if (!std::isfinite(f) || f < 0.0)
            fail(ErrorCode::DomainError, "rate constants must be finite and non-negative");
    }
    if (V <= 0.0) fail(ErrorCode::DomainError, "volume V must be positive");
}

KineticParams KineticParams::from_groups(double k1A, double k_m1, double k2,
                                         double k_m2AV, double V) {
    KineticParams kp{k1A, k_m1, k2, V > 0.0 ? k_m2AV / V : 0.0, 1.0, V};
    kp.validate();
    return kp;
}

ReducedStatParams reduce_params(const PhysicalParams& p) {
    const double fields[] = {p.carrier_mass, p.dot_radius, p.effective_gap,
                             p.photon_energy, p.reduced_planck};
    for (double f : fields) {
        if (!(std::isfinite(f) && f > 0.0))
            fail(ErrorCode::DomainError, "physical parameters must be positive");
    }
    if (p.photon_energy < p.effective_gap)
        fail(ErrorCode::DomainError, "photon energy below the effective gap");

    using std::numbers::pi;
    const double volume = 4.0 * pi * std::pow(p.dot_radius, 3) / 3.0;
    const double hbar3 = std::pow(p.reduced_planck, 3);
    const double g = std::pow(p.carrier_mass * p.effective_gap / (2.0 * pi), 1.5)
                     * volume / hbar3;
    return ReducedStatParams(g, p.photon_energy / p.effective_gap);
}

//---------------------------------------------------------------------------//

DiscreteDistribution::DiscreteDistribution(std::vector<int> support,
                                           std::vector<double> probs,
                                           std::vector<double> log_weights)
    : support_(std::move(support)),
      probs_(std::move(probs)),
      log_weights_(std::move(log_weights)) {}

void DiscreteDistribution::check_support(const std::vector<int>& support) {
    if (support.empty()) fail(ErrorCode::DomainError, "empty support");
    if (support.front() < 0) fail(ErrorCode::DomainError, "negative support point");
    for (std::size_t i = 1; i < support.size(); ++i) {
        if (support[i] <= support[i - 1])
            fail(ErrorCode::DomainError, "support must be strictly increasing");
    }
}

DiscreteDistribution DiscreteDistribution::from_log_weights(std::vector<int> support,
                                                            std::vector<double> log_weights) {
    check_support(support);
    if (log_weights.size() != support.size())
        fail(ErrorCode::DomainError, "support and weights differ in length");
    for (double w : log_weights) {
        if (std::isnan(w) || w == std::numeric_limits<double>::infinity())
            fail(ErrorCode::DomainError, "log-weight is NaN or +inf");
    }
    const double log_z = log_sum_exp(log_weights);
    if (!std::isfinite(log_z)) fail(ErrorCode::DomainError, "all weights vanish");

    std::vector<double> probs(log_weights.size());
    std::transform(log_weights.begin(), log_weights.end(), probs.begin(),
                   [log_z](double w) { return std::exp(w - log_z); });
    return DiscreteDistribution(std::move(support), std::move(probs), std::move(log_weights));
}

DiscreteDistribution DiscreteDistribution::from_probabilities(std::vector<int> support,
                                                              std::vector<double> probs,
                                                              double tolerance) {
    check_support(support);
    if (probs.size() != support.size())
        fail(ErrorCode::DomainError, "support and probabilities differ in length");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p))
            fail(ErrorCode::DomainError, "probabilities must be finite and non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > tolerance)
        fail(ErrorCode::DomainError,
             "probabilities sum to " + std::to_string(total) + ", not 1");

    std::vector<double> logs(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] /= total;
        logs[i] = std::log(probs[i]);
    }
    return DiscreteDistribution(std::move(support), std::move(probs), std::move(logs));
}

DiscreteDistribution DiscreteDistribution::point_mass(int n) {
    return from_probabilities({n}, {1.0});
}

double DiscreteDistribution::prob_at(int n) const noexcept {
    auto it = std::lower_bound(support_.begin(), support_.end(), n);
    if (it == support_.end() || *it != n) return 0.0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
}

int DiscreteDistribution::mode() const noexcept {
    auto it = std::max_element(probs_.begin(), probs_.end());
    return support_[static_cast<std::size_t>(it - probs_.begin())];
}

//---------------------------------------------------------------------------//

double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    auto sa = a.support();
    auto sb = b.support();
    auto pa = a.probs();
    auto pb = b.probs();
    std::size_t i = 0;
    std::size_t j = 0;
    double sum = 0.0;
    // Merge walk over the union of the two sorted supports.
    while (i < sa.size() || j < sb.size()) {
        if (j == sb.size() || (i < sa.size() && sa[i] < sb[j])) {
            sum += pa[i++];
        } else if (i == sa.size() || sb[j] < sa[i]) {
            sum += pb[j++];
        } else {
            sum += std::abs(pa[i++] - pb[j++]);
        }
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

MomentSummary moments(const DiscreteDistribution& d) {
    auto s = d.support();
    auto p = d.probs();
    MomentSummary m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double n = s[i];
        m.mean += n * p[i];
        m.second_moment += n * n * p[i];
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dev = s[i] - m.mean;
        m.variance += dev * dev * p[i];
    }
    m.fano_factor = m.mean > 0.0 ? m.variance / m.mean
                                 : std::numeric_limits<double>::quiet_NaN();
    // Same quantity as mean^2 + mean - second_moment, without the cancellation.
    m.poisson_deviation = m.mean - m.variance;
    m.exciton_yield = 0.5 * m.mean;
    return m;
}

DiscreteDistribution poisson_distribution(double lambda, double tail_mass) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        fail(ErrorCode::DomainError, "Poisson mean must be positive");
    if (!(tail_mass > 0.0 && tail_mass < 1.0))
        fail(ErrorCode::DomainError, "tail mass must lie in (0, 1)");

    std::vector<int> support;
    std::vector<double> logw;
    const double log_lambda = std::log(lambda);
    double lw = -lambda;
    for (int n = 0;; ++n) {
        support.push_back(n);
        logw.push_back(lw);
        const double ratio = lambda / (n + 1);
        // Past the mode the ratios only shrink, so the tail is geometric-bounded.
        if (ratio < 1.0 && lw + std::log(ratio / (1.0 - ratio)) < std::log(tail_mass)) break;
        lw += log_lambda - std::log(n + 1.0);
    }
    return DiscreteDistribution::from_log_weights(std::move(support), std::move(logw));
}

}  // namespace megstat
