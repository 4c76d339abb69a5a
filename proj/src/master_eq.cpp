// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include "megstat/master_eq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace megstat::master {

namespace {

constexpr int kMaxStates = 10'000'000;
constexpr double kTieTolerance = 8.0 * std::numeric_limits<double>::epsilon();

// r(x) = (a x + b) / ((x + 1)(c x + d)), the ratio P(x+1)/P(x).
struct RatioShape {
    double a;  // k1 A
    double b;  // k_m2 A V
    double c;  // k_m1 / V
    double d;  // k2

    explicit RatioShape(const KineticParams& kp)
        : a(kp.k1 * kp.A), b(kp.k_m2 * kp.A * kp.V), c(kp.k_m1 / kp.V), d(kp.k2) {}

    double birth(int n) const { return a * n + b; }
    double death_above(int n) const { return (n + 1.0) * (c * n + d); }

    // Bound q >= r(m) for every m >= n, when one is available from the
    // shape. r is unimodal on x >= 0: the sign of dr/dx follows
    //   f(x) = -a c x^2 - 2 b c x + a d - b (c + d),
    // which never increases on x >= 0.
    std::optional<double> tail_ratio_bound(int n, double r_n) const {
        if (c > 0.0) {
            const double x = n;
            const double f = -a * c * x * x - 2.0 * b * c * x + a * d - b * (c + d);
            if (f <= 0.0) return r_n;
            return std::nullopt;
        }
        // c == 0: r rises monotonically to a/d when a > b, else falls.
        return a <= b ? r_n : std::max(r_n, a / d);
    }
};

// +1 when P(n+1) > P(n), -1 when smaller, 0 on an exact tie.
int compare_step(double birth, double death_above) {
    const double scale = std::max(birth, death_above);
    if (std::abs(birth - death_above) <= kTieTolerance * scale) return 0;
    return birth > death_above ? 1 : -1;
}

void require_normalizable(const KineticParams& kp, const RatioShape& shape) {
    if (kp.k_m1 == 0.0 && shape.a >= shape.d) {
        fail(ErrorCode::NonNormalizable,
             "k_m1 = 0 and k1*A = " + std::to_string(shape.a) + " >= k2 = "
                 + std::to_string(shape.d) + ": the stationary ratio does not decay");
    }
}

int first_recurrent_state(const RatioShape& shape) {
    // With k2 = 0 the state 1 cannot decay, so 0 is left forever.
    return shape.d == 0.0 ? 1 : 0;
}

double logaddexp(double x, double y) {
    const double hi = std::max(x, y);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(-std::abs(x - y)));
}

std::vector<double> quadratic_real_roots(double qa, double qb, double qc) {
    std::vector<double> roots;
    if (qa == 0.0) {
        if (qb != 0.0) roots.push_back(-qc / qb);
        return roots;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return roots;
    if (disc == 0.0) {
        roots.push_back(-qb / (2.0 * qa));
        return roots;
    }
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    roots.push_back(q / qa);
    roots.push_back(q != 0.0 ? qc / q : -roots.front());
    std::sort(roots.begin(), roots.end());
    return roots;
}

bool same_roots(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i] - y[i]) > 1e-9 * std::max(1.0, std::abs(x[i]))) return false;
    }
    return true;
}

}  // namespace

double birth_rate(int n, const KineticParams& kp) {
    return kp.k1 * kp.A * n + kp.k_m2 * kp.A * kp.V;
}

double death_rate(int n, const KineticParams& kp) {
    const double x = n;
    return kp.k_m1 * x * (x - 1.0) / kp.V + kp.k2 * x;
}

RatePair rates_at(int n, const KineticParams& kp) {
    return {birth_rate(n, kp), death_rate(n, kp)};
}

StationaryResult stationary_distribution(const KineticParams& kp, double tail_tol) {
    kp.validate();
    if (!(tail_tol > 0.0 && tail_tol <= 1e-3))
        fail(ErrorCode::DomainError, "tail_tol must lie in (0, 1e-3]");

    const RatioShape shape(kp);
    if (shape.birth(0) == 0.0)
        return {DiscreteDistribution::point_mass(0), true};
    require_normalizable(kp, shape);

    const int start = first_recurrent_state(shape);
    const double log_tol = std::log(tail_tol);
    std::vector<int> support{start};
    std::vector<double> logw{0.0};
    double log_z = 0.0;

    for (int n = start;; ++n) {
        const double birth = shape.birth(n);
        const double death = shape.death_above(n);
        const double r = birth / death;
        const double lw = logw.back();
        if (auto q = shape.tail_ratio_bound(n, r); q && *q < 1.0) {
            // Unnormalized tail beyond n is at most w(n) q / (1 - q).
            if (*q == 0.0 || lw + std::log(*q / (1.0 - *q)) - log_z < log_tol) break;
        }
        if (support.size() >= static_cast<std::size_t>(kMaxStates))
            fail(ErrorCode::DomainError, "stationary support exceeds the state cap");
        const double next = lw + std::log(birth) - std::log(death);
        support.push_back(n + 1);
        logw.push_back(next);
        log_z = logaddexp(log_z, next);
    }
    return {DiscreteDistribution::from_log_weights(std::move(support), std::move(logw)), false};
}

std::vector<double> closed_form_roots(const KineticParams& kp) {
    const double V = kp.V;
    return quadratic_real_roots(kp.k_m1, kp.k_m1 + kp.k2 * V - kp.k1 * kp.A * V,
                                kp.k2 * V - kp.k_m2 * kp.A * V * V);
}

std::vector<double> printed_closed_form_roots(const KineticParams& kp) {
    std::vector<double> roots;
    if (kp.k_m1 == 0.0) return roots;
    const double V = kp.V;
    const double lin = kp.k_m1 + kp.k2 * V - kp.k1 * kp.A * V;
    const double disc = lin * lin - 4.0 * kp.k_m1 * (kp.k_m2 * kp.A * V * V + kp.k2 * V);
    if (disc < 0.0) return roots;
    const double s = std::sqrt(disc);
    roots.push_back((lin - s) / (2.0 * kp.k_m1));
    roots.push_back((lin + s) / (2.0 * kp.k_m1));
    if (s == 0.0) roots.pop_back();
    return roots;
}

ExtremaReport find_extrema(const KineticParams& kp) {
    kp.validate();
    ExtremaReport report;
    report.continuous_roots = closed_form_roots(kp);
    report.printed_roots = printed_closed_form_roots(kp);
    report.discrepancy_flag = !same_roots(report.continuous_roots, report.printed_roots);

    const RatioShape shape(kp);
    if (shape.birth(0) == 0.0) {
        report.integer_maxima = {0};
        report.mode_count = 1;
        return report;
    }
    require_normalizable(kp, shape);

    // steps[i] compares P(start+i+1) against P(start+i); the scan ends at
    // the first downward step after which no crossing can follow.
    const int start = first_recurrent_state(shape);
    std::vector<int> steps;
    for (int n = start;; ++n) {
        const double birth = shape.birth(n);
        const double death = shape.death_above(n);
        const int cmp = compare_step(birth, death);
        steps.push_back(cmp);
        if (cmp < 0) {
            if (auto q = shape.tail_ratio_bound(n, birth / death); q && *q < 1.0) break;
        }
        if (steps.size() >= static_cast<std::size_t>(kMaxStates))
            fail(ErrorCode::DomainError, "extremum scan exceeds the state cap");
    }

    // Walk plateaus of tied states [lo, hi] and classify them by the step
    // entering and the step leaving. A leading boundary plateau counts as a
    // maximum when it is followed by a descent; minima must be interior.
    const int count = static_cast<int>(steps.size());
    int i = 0;
    while (i < count) {
        int j = i;
        while (j < count && steps[j] == 0) ++j;
        // States start+i .. start+j are tied; steps[j] leaves the plateau.
        const int leaving = steps[j];
        const int entering = i == 0 ? 0 : steps[i - 1];
        const bool rises_into = i == 0 || entering > 0;
        if (rises_into && leaving < 0) {
            for (int k = i; k <= j; ++k) report.integer_maxima.push_back(start + k);
            ++report.mode_count;
        } else if (i > 0 && entering < 0 && leaving > 0) {
            for (int k = i; k <= j; ++k) report.integer_minima.push_back(start + k);
        }
        i = j + 1;
    }
    report.is_bimodal = report.mode_count >= 2;
    return report;
}

double fast_meg_limit_root(const KineticParams& kp) {
    kp.validate();
    if (kp.k_m1 != 0.0)
        fail(ErrorCode::DomainError, "the fast-generation limit requires k_m1 = 0");
    const double denom = kp.k1 * kp.A - kp.k2;
    if (denom == 0.0)
        fail(ErrorCode::DegenerateDenominator, "k1*A equals k2: no finite extremum");
    return (kp.k2 - kp.k_m2 * kp.A * kp.V) / denom;
}

double detailed_balance_gap(const KineticParams& kp) {
    kp.validate();
    if (kp.k_m1 == 0.0 || kp.k2 == 0.0)
        fail(ErrorCode::NotApplicable, "detailed balance needs k_m1 > 0 and k2 > 0");
    return std::abs(kp.k1 * kp.A / kp.k_m1 - kp.k_m2 * kp.A / kp.k2);
}

}  // namespace megstat::master
