// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "megstat/core_model.hpp"
#include "megstat/master_eq.hpp"

/// Direct-method stochastic simulation of a birth-death chain.
namespace megstat::ssa {

/// Name recorded in every output artifact that depends on a seed.
inline constexpr std::string_view kGeneratorName = "std::mt19937_64 + 53-bit open uniform (v1)";

/// 64-bit Mersenne Twister with a fixed, library-independent mapping to
/// doubles in (0, 1). The standard distributions are implementation-defined,
/// so they are avoided here to keep sequences identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

private:
    std::mt19937_64 engine_;
};

template <class R>
concept BirthDeathRates = requires(const R& r, int n) {
    { r.birth(n) } -> std::convertible_to<double>;
    { r.death(n) } -> std::convertible_to<double>;
};

/// Rates of the exciton master equation.
struct KineticRates {
    KineticParams params;
    double birth(int n) const { return master::birth_rate(n, params); }
    double death(int n) const { return master::death_rate(n, params); }
};

struct StopCondition {
    std::optional<std::uint64_t> max_events;
    std::optional<double> max_time;
};

struct Trajectory {
    std::vector<double> event_times;
    std::vector<int> states;  ///< state after each event
    int initial_state = 0;
    std::uint64_t seed = 0;
    bool frozen = false;      ///< stopped because total propensity hit zero
    double end_time = 0.0;    ///< max_time when it stopped the run, else last event time
};

/// Runs the chain event by event. `visit(time, state)` is called after every
/// event; returns the number of events and whether the chain froze.
template <BirthDeathRates Rates, class Visitor>
std::pair<std::uint64_t, bool> run_direct_method(const Rates& rates, int n_init,
                                                 const StopCondition& stop,
                                                 std::uint64_t seed, Visitor&& visit) {
    Rng rng(seed);
    int state = n_init;
    double time = 0.0;
    std::uint64_t events = 0;
    while (!stop.max_events || events < *stop.max_events) {
        const double up = rates.birth(state);
        const double down = state > 0 ? static_cast<double>(rates.death(state)) : 0.0;
        const double total = up + down;
        if (!(total > 0.0)) return {events, true};
        const double next = time + rng.exponential(total);
        if (stop.max_time && next > *stop.max_time) break;
        time = next;
        state += rng.uniform_open() * total < up ? 1 : -1;
        ++events;
        visit(time, state);
    }
    return {events, false};
}

template <BirthDeathRates Rates>
Trajectory simulate_chain(const Rates& rates, int n_init, const StopCondition& stop,
                          std::uint64_t seed) {
    if (n_init < 0) fail(ErrorCode::DomainError, "initial state must be non-negative");
    if (!stop.max_events && !stop.max_time)
        fail(ErrorCode::DomainError, "a stop condition (events or time) is required");
    Trajectory traj;
    traj.initial_state = n_init;
    traj.seed = seed;
    if (stop.max_events) {
        const auto hint = static_cast<std::size_t>(std::min<std::uint64_t>(*stop.max_events, 1u << 22));
        traj.event_times.reserve(hint);
        traj.states.reserve(hint);
    }
    auto [events, frozen] = run_direct_method(rates, n_init, stop, seed, [&](double t, int n) {
        traj.event_times.push_back(t);
        traj.states.push_back(n);
    });
    traj.frozen = frozen;
    traj.end_time = traj.event_times.empty() ? 0.0 : traj.event_times.back();
    if (!frozen && stop.max_time && (!stop.max_events || events < *stop.max_events))
        traj.end_time = *stop.max_time;
    return traj;
}

Trajectory simulate_trajectory(const KineticParams& kp, int n_init, const StopCondition& stop,
                               std::uint64_t seed);

/// Time-weighted occupancy of a run of `n_events` events started at
/// `n_init`, discarding the first `burn_in_fraction` of the events.
template <BirthDeathRates Rates>
DiscreteDistribution occupancy_histogram(const Rates& rates, int n_init, std::uint64_t seed,
                                         std::uint64_t n_events, double burn_in_fraction) {
    if (n_events < 10'000) fail(ErrorCode::DomainError, "at least 10^4 events are required");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction <= 0.5))
        fail(ErrorCode::DomainError, "burn-in fraction must lie in [0, 0.5]");
    const auto burn_in = static_cast<std::uint64_t>(burn_in_fraction * static_cast<double>(n_events));

    std::vector<double> residence;
    std::uint64_t seen = 0;
    int state = n_init;
    double last_time = 0.0;
    auto [events, frozen] = run_direct_method(
        rates, n_init, StopCondition{n_events, std::nullopt}, seed, [&](double t, int n) {
            if (seen >= burn_in) {
                if (static_cast<std::size_t>(state) >= residence.size())
                    residence.resize(static_cast<std::size_t>(state) + 1, 0.0);
                residence[static_cast<std::size_t>(state)] += t - last_time;
            }
            ++seen;
            state = n;
            last_time = t;
        });
    if (frozen && events <= burn_in)
        fail(ErrorCode::FrozenChain, "the chain froze before the burn-in ended");
    if (frozen) {
        // An absorbing state reached after burn-in holds for all later time.
        return DiscreteDistribution::point_mass(state);
    }

    double total = 0.0;
    for (double r : residence) total += r;
    std::vector<int> support;
    std::vector<double> probs;
    for (std::size_t n = 0; n < residence.size(); ++n) {
        if (residence[n] > 0.0) {
            support.push_back(static_cast<int>(n));
            probs.push_back(residence[n] / total);
        }
    }
    return DiscreteDistribution::from_probabilities(std::move(support), std::move(probs), 1e-9);
}

/// Empirical stationary law of the kinetic chain started at N = 0.
/// Throws FrozenChain if no event can happen before the burn-in ends.
DiscreteDistribution stationary_histogram(const KineticParams& kp, std::uint64_t seed,
                                          std::uint64_t n_events, double burn_in_fraction);

/// Equal-weight merge of `replicas` histograms; replica r uses seed
/// base_seed + r. The result does not depend on `threads`.
DiscreteDistribution merged_stationary_histogram(const KineticParams& kp,
                                                 std::uint64_t base_seed, int replicas,
                                                 std::uint64_t n_events,
                                                 double burn_in_fraction, int threads = 1);

}  // namespace megstat::ssa
