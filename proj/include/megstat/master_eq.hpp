// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "megstat/core_model.hpp"

/// One-variable birth-death master equation for the exciton number N:
///
///   birth(N) = k1 A N + k_m2 A V             (N -> N+1)
///   death(N) = k_m1 N (N-1) / V + k2 N       (N -> N-1)
///
/// Its stationary law is the product of ratios r(n) = birth(n)/death(n+1).
namespace megstat::master {

struct RatePair {
    double birth = 0.0;
    double death = 0.0;
};

double birth_rate(int n, const KineticParams& kp);
double death_rate(int n, const KineticParams& kp);
RatePair rates_at(int n, const KineticParams& kp);

struct StationaryResult {
    DiscreteDistribution distribution;
    /// birth(0) == 0: the empty state absorbs and the law is {0: 1}.
    bool empty_chain = false;
};

/// Exact stationary law P(N) = P(start) prod r(n), accumulated in log space.
///
/// The support ends at the first N past the last ratio crossing where the
/// geometric bound on the remaining (normalized) tail drops below tail_tol.
/// When k2 == 0 the state 0 is transient and the support starts at 1.
/// Throws NonNormalizable when k_m1 == 0 and k1 A >= k2.
StationaryResult stationary_distribution(const KineticParams& kp, double tail_tol = 1e-12);

struct ExtremaReport {
    std::vector<double> continuous_roots;    ///< real roots of birth(N) = death(N+1)
    std::vector<int> integer_maxima;         ///< ascending; tied states all listed
    std::vector<int> integer_minima;         ///< interior minima only
    int mode_count = 0;                      ///< separate maxima (a tie counts once)
    bool is_bimodal = false;
    bool normalizable = true;
    std::vector<double> printed_roots;       ///< roots of the closed form as published
    bool discrepancy_flag = false;
};

/// Locates maxima and minima of the stationary law by scanning r(N) against 1.
/// Also solves the quadratic
///     k_m1 N^2 + (k_m1 + k2 V - k1 A V) N + (k2 V - k_m2 A V^2) = 0
/// and compares it with the published closed form, whose linear-term and
/// constant-term signs differ; `discrepancy_flag` marks disagreement.
ExtremaReport find_extrema(const KineticParams& kp);

/// Published roots for comparison: [(k_m1 + k2 V - k1 A V) +- sqrt(D)] / (2 k_m1)
/// with D = (k1 A V - k_m1 - k2 V)^2 - 4 k_m1 (k_m2 A V^2 + k2 V).
/// Empty when k_m1 == 0 or D < 0.
std::vector<double> printed_closed_form_roots(const KineticParams& kp);

/// Real roots of birth(N) = death(N+1) in ascending order.
std::vector<double> closed_form_roots(const KineticParams& kp);

/// Single extremum when k_m1 == 0: N0 = (k2 - k_m2 A V) / (k1 A - k2).
/// Throws DegenerateDenominator when k1 A == k2 and DomainError if k_m1 != 0.
double fast_meg_limit_root(const KineticParams& kp);

/// |k1 A / k_m1 - k_m2 A / k2|: zero exactly when both reactions balance at
/// the same concentration, in which case the law is Poisson((k1 A / k_m1) V).
/// Throws NotApplicable when k_m1 == 0 or k2 == 0.
double detailed_balance_gap(const KineticParams& kp);

/// Master-equation right-hand side dP/dt on the lattice 0..p.size()-1.
/// Birth out of the last state leaves the lattice.
void master_rhs(const KineticParams& kp, std::span<const double> p, std::span<double> dp);

/// Integrates the master equation from `initial` and returns the law at each
/// time in `t_grid` (non-decreasing, starting at or after 0).
///
/// Classical RK4 on the lattice 0..n_max with a step bounded by the largest
/// total escape rate. Mass at n_max above 1e-9 raises TruncationBreach; a
/// drift in total probability above 1e-9 raises StepFailure. Nothing is
/// renormalized beyond that drift.
std::vector<DiscreteDistribution> transient_evolve(const KineticParams& kp,
                                                   const DiscreteDistribution& initial,
                                                   std::span<const double> t_grid,
                                                   int n_max);

}  // namespace megstat::master
