// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "megstat/master_eq.hpp"

namespace megstat::master {

namespace {

constexpr double kBoundaryMass = 1e-9;
constexpr double kConservationTolerance = 1e-9;
constexpr double kNegativityTolerance = 1e-12;
// RK4 is stable for |h lambda| <= 2.78 on the negative axis; Gershgorin puts
// every generator eigenvalue within 2 * max escape rate of the origin.
constexpr double kStepFraction = 0.1;

// Tridiagonal generator with precomputed rates.
class Lattice {
public:
    Lattice(const KineticParams& kp, int n_max)
        : birth_(static_cast<std::size_t>(n_max) + 1),
          death_(static_cast<std::size_t>(n_max) + 1) {
        for (int n = 0; n <= n_max; ++n) {
            birth_[n] = birth_rate(n, kp);
            death_[n] = death_rate(n, kp);
        }
    }

    std::size_t size() const { return birth_.size(); }

    double max_escape_rate() const {
        double top = 0.0;
        for (std::size_t n = 0; n < size(); ++n) top = std::max(top, birth_[n] + death_[n]);
        return top;
    }

    void apply(std::span<const double> p, std::span<double> dp) const {
        const std::size_t last = size() - 1;
        for (std::size_t n = 0; n <= last; ++n) {
            double v = -p[n] * (birth_[n] + death_[n]);
            if (n > 0) v += p[n - 1] * birth_[n - 1];
            if (n < last) v += p[n + 1] * death_[n + 1];
            dp[n] = v;
        }
    }

private:
    std::vector<double> birth_;
    std::vector<double> death_;
};

class Rk4 {
public:
    explicit Rk4(const Lattice& lattice)
        : lattice_(lattice),
          k1_(lattice.size()), k2_(lattice.size()), k3_(lattice.size()),
          k4_(lattice.size()), tmp_(lattice.size()) {}

    void step(std::vector<double>& p, double h) {
        const std::size_t m = p.size();
        lattice_.apply(p, k1_);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = p[i] + 0.5 * h * k1_[i];
        lattice_.apply(tmp_, k2_);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = p[i] + 0.5 * h * k2_[i];
        lattice_.apply(tmp_, k3_);
        for (std::size_t i = 0; i < m; ++i) tmp_[i] = p[i] + h * k3_[i];
        lattice_.apply(tmp_, k4_);
        for (std::size_t i = 0; i < m; ++i)
            p[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    const Lattice& lattice_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

DiscreteDistribution snapshot(const std::vector<double>& p, double t) {
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > kConservationTolerance)
        fail(ErrorCode::StepFailure, "probability drifted to " + std::to_string(total)
                                         + " at t = " + std::to_string(t));
    std::vector<int> support(p.size());
    std::iota(support.begin(), support.end(), 0);
    std::vector<double> probs(p);
    for (double& v : probs) {
        if (v < -kNegativityTolerance)
            fail(ErrorCode::StepFailure, "negative probability at t = " + std::to_string(t));
        v = std::max(v, 0.0);
    }
    return DiscreteDistribution::from_probabilities(std::move(support), std::move(probs),
                                                    kConservationTolerance);
}

}  // namespace

void master_rhs(const KineticParams& kp, std::span<const double> p, std::span<double> dp) {
    if (p.empty() || dp.size() != p.size())
        fail(ErrorCode::DomainError, "master_rhs needs matching non-empty spans");
    Lattice(kp, static_cast<int>(p.size()) - 1).apply(p, dp);
}

std::vector<DiscreteDistribution> transient_evolve(const KineticParams& kp,
                                                   const DiscreteDistribution& initial,
                                                   std::span<const double> t_grid,
                                                   int n_max) {
    kp.validate();
    if (n_max < 1) fail(ErrorCode::DomainError, "n_max must be at least 1");
    if (initial.support().back() > n_max)
        fail(ErrorCode::DomainError, "initial law extends beyond n_max");
    double previous = 0.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < previous)
            fail(ErrorCode::DomainError, "time grid must be finite, non-negative and non-decreasing");
        previous = t;
    }

    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::size_t i = 0; i < initial.size(); ++i)
        p[static_cast<std::size_t>(initial.support()[i])] = initial.probs()[i];

    const Lattice lattice(kp, n_max);
    Rk4 rk4(lattice);
    const double escape = lattice.max_escape_rate();
    const double h_max = escape > 0.0 ? kStepFraction / escape : 0.0;

    std::vector<DiscreteDistribution> out;
    out.reserve(t_grid.size());
    double t = 0.0;
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0 && escape > 0.0) {
            const auto steps = static_cast<long long>(std::ceil(span / h_max));
            const double h = span / static_cast<double>(steps);
            for (long long s = 0; s < steps; ++s) {
                rk4.step(p, h);
                if (p.back() > kBoundaryMass)
                    fail(ErrorCode::TruncationBreach,
                         "mass " + std::to_string(p.back()) + " reached n_max = "
                             + std::to_string(n_max) + " at t = " + std::to_string(t + (s + 1) * h));
            }
        }
        t = target;
        out.push_back(snapshot(p, t));
    }
    return out;
}

}  // namespace megstat::master
