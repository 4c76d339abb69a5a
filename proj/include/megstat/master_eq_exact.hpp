// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "megstat/error.hpp"

/// Exact rational versions of the master-equation quantities, for checking
/// crossings and small-N products without rounding.
namespace megstat::master::exact {

using Rational = boost::multiprecision::cpp_rational;

/// Rate groups of the chain: birth(N) = k1A N + k_m2AV,
/// death(N) = k_m1 N (N-1) / V + k2 N.
struct RationalKinetics {
    Rational k1A;
    Rational k_m1;
    Rational k2;
    Rational k_m2AV;
    Rational V{1};
};

inline Rational birth(const Rational& n, const RationalKinetics& kp) {
    return kp.k1A * n + kp.k_m2AV;
}

inline Rational death(const Rational& n, const RationalKinetics& kp) {
    return kp.k_m1 * n * (n - 1) / kp.V + kp.k2 * n;
}

/// r(N) = birth(N) / death(N + 1), for real (rational) N as well as integers.
inline Rational stationarity_ratio(const Rational& n, const RationalKinetics& kp) {
    const Rational den = death(n + 1, kp);
    if (den == 0) fail(ErrorCode::DomainError, "death rate vanishes above N");
    return birth(n, kp) / den;
}

inline Rational fast_meg_limit_root(const RationalKinetics& kp) {
    if (kp.k_m1 != 0) fail(ErrorCode::DomainError, "the fast-generation limit requires k_m1 = 0");
    const Rational den = kp.k1A - kp.k2;
    if (den == 0) fail(ErrorCode::DegenerateDenominator, "k1*A equals k2");
    return (kp.k2 - kp.k_m2AV) / den;
}

/// Unnormalized weights P(N)/P(0) for N = 0..n_max.
inline std::vector<Rational> stationary_weights(const RationalKinetics& kp, int n_max) {
    std::vector<Rational> w{Rational(1)};
    for (int n = 0; n < n_max; ++n) w.push_back(w.back() * stationarity_ratio(Rational(n), kp));
    return w;
}

}  // namespace megstat::master::exact
