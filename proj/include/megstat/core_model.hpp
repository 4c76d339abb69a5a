// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "megstat/error.hpp"

namespace megstat {

/// Dimensional quantum-dot and photon inputs. Any consistent unit system
/// works; only the products entering the coupling matter.
struct PhysicalParams {
    double carrier_mass;    ///< electron (hole) mass
    double dot_radius;      ///< dot radius R, volume is 4 pi R^3 / 3
    double effective_gap;   ///< band gap including exciton binding
    double photon_energy;   ///< absorbed photon energy h nu
    double reduced_planck;  ///< hbar in the same unit system
};

/// The two dimensionless numbers that fix the multiplicity law: the phase
/// space coupling g and the photon energy in units of the effective gap.
class ReducedStatParams {
public:
    /// Throws DomainError unless coupling > 0 and energy_ratio >= 1.
    ReducedStatParams(double coupling, double energy_ratio);

    double coupling() const noexcept { return coupling_; }
    double energy_ratio() const noexcept { return energy_ratio_; }

private:
    double coupling_;
    double energy_ratio_;
};

/// Rate constants of the two-reaction exciton scheme. `A` is a constant
/// reservoir; `V` the dot volume.
///   k1   : A + X -> 2X   (autocatalytic generation)
///   k_m1 : 2X -> A + X   (impact recombination)
///   k2   : X ->          (single-exciton annihilation)
///   k_m2 :   -> X        (single-exciton generation)
struct KineticParams {
    double k1 = 0.0;
    double k_m1 = 0.0;
    double k2 = 0.0;
    double k_m2 = 0.0;
    double A = 1.0;
    double V = 1.0;

    /// Throws DomainError on negative or non-finite fields or V <= 0.
    void validate() const;

    /// Builds parameters from the rate groups the master equation actually
    /// depends on (k1*A, k_m1, k2, k_m2*A*V, V), taking A = 1.
    static KineticParams from_groups(double k1A, double k_m1, double k2,
                                     double k_m2AV, double V);
};

/// Normalized probability mass on a strictly increasing set of
/// non-negative integers. Immutable after construction.
class DiscreteDistribution {
public:
    /// Normalizes exp(log_weights) with log-sum-exp. Entries may be -inf
    /// but at least one must be finite.
    static DiscreteDistribution from_log_weights(std::vector<int> support,
                                                 std::vector<double> log_weights);

    /// Accepts probabilities already summing to 1 within `tolerance`
    /// (DomainError otherwise) and rescales the remainder away.
    static DiscreteDistribution from_probabilities(std::vector<int> support,
                                                   std::vector<double> probs,
                                                   double tolerance = 1e-12);

    static DiscreteDistribution point_mass(int n);

    std::span<const int> support() const noexcept { return support_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::span<const double> log_weights() const noexcept { return log_weights_; }
    std::size_t size() const noexcept { return support_.size(); }

    /// Probability of `n`; zero off the support.
    double prob_at(int n) const noexcept;

    /// Largest probability; ties resolve to the smallest state.
    int mode() const noexcept;

private:
    DiscreteDistribution(std::vector<int> support, std::vector<double> probs,
                         std::vector<double> log_weights);
    static void check_support(const std::vector<int>& support);

    std::vector<int> support_;
    std::vector<double> probs_;
    std::vector<double> log_weights_;
};

struct MomentSummary {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double fano_factor = 0.0;        ///< variance / mean (NaN at mean 0)
    double poisson_deviation = 0.0;  ///< mean^2 + mean - second_moment
    double exciton_yield = 0.0;      ///< mean / 2
};

/// g = (m Eg)^{3/2} (4 pi R^3 / 3) / (2^{3/2} pi^{3/2} hbar^3), eps = h nu / Eg.
ReducedStatParams reduce_params(const PhysicalParams& p);

/// Half the L1 distance over the union of supports.
double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b);

MomentSummary moments(const DiscreteDistribution& d);

/// Poisson(lambda) truncated once the remaining upper tail is below
/// `tail_mass`, then renormalized.
DiscreteDistribution poisson_distribution(double lambda, double tail_mass = 1e-16);

/// log(sum(exp(x))) without overflow; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x);

/// Thread-safe log|Gamma(x)|.
double log_gamma(double x);

}  // namespace megstat
