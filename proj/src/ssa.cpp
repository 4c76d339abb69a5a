// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include "megstat/ssa.hpp"

#include <algorithm>
#include <map>
#include <thread>

namespace megstat::ssa {

Trajectory simulate_trajectory(const KineticParams& kp, int n_init, const StopCondition& stop,
                               std::uint64_t seed) {
    kp.validate();
    return simulate_chain(KineticRates{kp}, n_init, stop, seed);
}

DiscreteDistribution stationary_histogram(const KineticParams& kp, std::uint64_t seed,
                                          std::uint64_t n_events, double burn_in_fraction) {
    kp.validate();
    return occupancy_histogram(KineticRates{kp}, 0, seed, n_events, burn_in_fraction);
}

DiscreteDistribution merged_stationary_histogram(const KineticParams& kp,
                                                 std::uint64_t base_seed, int replicas,
                                                 std::uint64_t n_events,
                                                 double burn_in_fraction, int threads) {
    kp.validate();
    if (replicas < 1) fail(ErrorCode::DomainError, "at least one replica is required");
    threads = std::clamp(threads, 1, replicas);

    std::vector<std::optional<DiscreteDistribution>> parts(static_cast<std::size_t>(replicas));
    std::vector<std::exception_ptr> errors(parts.size());
    auto worker = [&](int first) {
        for (int r = first; r < replicas; r += threads) {
            try {
                parts[static_cast<std::size_t>(r)] = stationary_histogram(
                    kp, base_seed + static_cast<std::uint64_t>(r), n_events, burn_in_fraction);
            } catch (...) {
                errors[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < threads; ++w) pool.emplace_back(worker, w);
        worker(0);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Fixed replica order and equal weights keep the merge deterministic.
    std::map<int, double> merged;
    const double weight = 1.0 / replicas;
    for (const auto& part : parts) {
        for (std::size_t i = 0; i < part->size(); ++i)
            merged[part->support()[i]] += weight * part->probs()[i];
    }
    std::vector<int> support;
    std::vector<double> probs;
    for (const auto& [n, p] : merged) {
        support.push_back(n);
        probs.push_back(p);
    }
    return DiscreteDistribution::from_probabilities(std::move(support), std::move(probs), 1e-9);
}

}  // namespace megstat::ssa
