// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion with its wall time.
// Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "golden_cases.hpp"
#include "megstat/cli.hpp"
#include "megstat/fermi_stat.hpp"
#include "megstat/master_eq.hpp"
#include "megstat/ssa.hpp"
#include "test_support.hpp"

namespace {

using namespace megstat;
using G = KineticParams;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool within_rel(double value, double target, double tol) {
    return std::abs(value - target) <= tol * std::abs(target);
}

Verdict pbse_reproduction() {
    Verdict v;
    const auto cal = fermi::calibrate_coupling(3.63, 4.2);
    const auto low = moments(fermi::multiplicity_distribution(ReducedStatParams(cal.coupling, 3.63)));
    const auto high = moments(fermi::multiplicity_distribution(ReducedStatParams(cal.coupling, 4.9)));
    v.require(std::abs(low.mean - 4.2) <= 1e-6, "calibrated mean " + fmt("%.9g", low.mean));
    v.require(within_rel(low.second_moment, 18.4, 0.05), "<n^2>(3.63) = " + fmt("%.6g", low.second_moment));
    v.require(within_rel(high.mean, 5.7, 0.10), "mean(4.9) = " + fmt("%.6g", high.mean));
    v.require(within_rel(high.second_moment, 33.46, 0.10), "<n^2>(4.9) = " + fmt("%.6g", high.second_moment));
    if (v.pass) {
        v.detail = "g=" + fmt("%.6f", cal.coupling) + " <n^2>=" + fmt("%.4f", low.second_moment) +
                   " mean(4.9)=" + fmt("%.4f", high.mean) + " <n^2>(4.9)=" + fmt("%.4f", high.second_moment);
    }
    return v;
}

Verdict non_poissonian() {
    Verdict v;
    const auto cal = fermi::calibrate_coupling(3.63, 4.2);
    const double d_low = moments(fermi::multiplicity_distribution(ReducedStatParams(cal.coupling, 3.63))).poisson_deviation;
    const double d_high = moments(fermi::multiplicity_distribution(ReducedStatParams(cal.coupling, 4.9))).poisson_deviation;
    v.require(d_low > 0.0, "deviation(3.63) not positive");
    v.require(d_high > 0.0, "deviation(4.9) not positive");
    v.require(d_high > d_low, "deviation does not grow from 3.63 to 4.9");
    int grid = 0;
    for (int e = -2; e <= 5; ++e) {
        const double g = std::pow(10.0, e);
        for (int k = 0; k <= 349; ++k) {
            const double eps = 1.02 + 0.02 * k;
            const auto m = moments(fermi::multiplicity_distribution(ReducedStatParams(g, eps)));
            ++grid;
            if (!(m.poisson_deviation > 0.0)) {
                v.require(false, "not sub-Poissonian at g=" + fmt("%g", g) + " eps=" + fmt("%g", eps));
            }
        }
    }
    if (v.pass) {
        v.detail = "deviation " + fmt("%.4f", d_low) + " -> " + fmt("%.4f", d_high) + ", " +
                   std::to_string(grid) + " grid points sub-Poissonian";
    }
    return v;
}

Verdict detailed_balance() {
    Verdict v;
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    double worst_tv = 0.0, smallest_dev = INFINITY;
    for (int i = 0; i < 25; ++i) {
        const double km1 = u(rng), k2 = u(rng), xbar = u(rng), V = u(rng);
        const auto kp = G::from_groups(km1 * xbar, km1, k2, k2 * xbar * V, V);
        const auto d = master::stationary_distribution(kp, 1e-15).distribution;
        worst_tv = std::max(worst_tv, total_variation(d, poisson_distribution(xbar * V, 1e-17)));
    }
    int incompatible = 0;
    while (incompatible < 25) {
        const auto kp = G::from_groups(u(rng), u(rng), u(rng), u(rng), u(rng));
        if (master::detailed_balance_gap(kp) < 1e-3) continue;
        ++incompatible;
        smallest_dev = std::min(smallest_dev,
                                std::abs(moments(master::stationary_distribution(kp, 1e-14).distribution).poisson_deviation));
    }
    v.require(worst_tv < 1e-10, "balanced TV " + fmt("%.3g", worst_tv));
    v.require(smallest_dev > 1e-6, "unbalanced |deviation| " + fmt("%.3g", smallest_dev));
    if (v.pass) v.detail = "25+25 sets, max TV " + fmt("%.2g", worst_tv) + ", min |dev| " + fmt("%.3g", smallest_dev);
    return v;
}

Verdict stationarity_oracle() {
    Verdict v;
    auto battery = test::kinetic_battery();
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    for (int i = 0; i < 30; ++i) battery.push_back({"random", G::from_groups(u(rng), u(rng), u(rng), u(rng), u(rng))});
    double worst_res = 0.0, worst_hp = 0.0;
    for (const auto& [name, kp] : battery) {
        const auto d = master::stationary_distribution(kp, 1e-13).distribution;
        for (std::size_t i = 1; i + 1 < d.size(); ++i) {
            double scale = 0.0;
            const double res = test::stationary_residual(kp, d, d.support()[i], &scale);
            if (scale > 0.0) worst_res = std::max(worst_res, std::abs(res) / scale);
        }
        if (d.support().front() != 0) continue;
        const auto ref = test::high_precision_stationary(kp, 400);
        for (int n = 0; n <= 50 && n <= d.support().back(); ++n) {
            const double want = static_cast<double>(ref[static_cast<std::size_t>(n)]);
            if (want > 0.0) worst_hp = std::max(worst_hp, std::abs(d.prob_at(n) / want - 1.0));
        }
    }
    v.require(worst_res < 1e-10, "relative residual " + fmt("%.3g", worst_res));
    v.require(worst_hp < 1e-9, "high-precision mismatch " + fmt("%.3g", worst_hp));
    if (v.pass) v.detail = std::to_string(battery.size()) + " sets, residual " + fmt("%.2g", worst_res) + ", vs 50-digit " + fmt("%.2g", worst_hp);
    return v;
}

Verdict extrema() {
    Verdict v;
    const auto rep = master::find_extrema(G::from_groups(5, 0.3, 2, 0.1, 1));
    v.require(rep.integer_maxima == std::vector<int>{0, 9}, "bimodal maxima differ from {0, 9}");
    v.require(rep.continuous_roots.size() == 2 && std::abs(rep.continuous_roots[0] - 0.770) <= 1e-3 &&
                  std::abs(rep.continuous_roots[1] - 8.231) <= 1e-3,
              "continuous roots off");
    v.require(rep.discrepancy_flag, "closed-form discrepancy not flagged");
    const double n0 = master::fast_meg_limit_root(G::from_groups(0.5, 0, 1, 2, 1));
    v.require(n0 == 2.0, "fast-MEG root " + fmt("%.17g", n0));
    if (v.pass) v.detail = "maxima {0,9}, roots " + fmt("%.4f", rep.continuous_roots[0]) + "/" + fmt("%.4f", rep.continuous_roots[1]) + ", N0=2";
    return v;
}

Verdict transient() {
    Verdict v;
    const auto immigration = G::from_groups(0, 0, 1, 3, 1);
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(0.25 * i);
    const auto snaps = master::transient_evolve(immigration, DiscreteDistribution::point_mass(0), times, 40);
    double worst_mean = 0.0, worst_mass = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        worst_mean = std::max(worst_mean, std::abs(moments(snaps[i]).mean - 3.0 * (1.0 - std::exp(-times[i]))));
    }
    double worst_tv = 0.0;
    for (const auto& [name, kp] : test::kinetic_battery()) {
        const auto stationary = master::stationary_distribution(kp, 1e-14).distribution;
        const std::vector<double> grid{0.5, 5.0, 50.0, 200.0};
        const auto s = master::transient_evolve(kp, DiscreteDistribution::point_mass(0), grid,
                                                stationary.support().back() + 5);
        for (const auto& d : s) {
            worst_mass = std::max(worst_mass, std::abs(std::accumulate(d.probs().begin(), d.probs().end(), 0.0) - 1.0));
        }
        worst_tv = std::max(worst_tv, total_variation(s.back(), stationary));
    }
    v.require(worst_mean < 1e-6, "mean error " + fmt("%.3g", worst_mean));
    v.require(worst_tv < 1e-6, "long-time TV " + fmt("%.3g", worst_tv));
    v.require(worst_mass < 1e-9, "mass drift " + fmt("%.3g", worst_mass));
    if (v.pass) v.detail = "mean err " + fmt("%.2g", worst_mean) + ", TV " + fmt("%.2g", worst_tv) + ", mass " + fmt("%.2g", worst_mass);
    return v;
}

Verdict ssa_oracle() {
    Verdict v;
    double worst = 0.0;
    int regimes = 0;
    std::uint64_t seed = 1000;
    for (const auto& [name, kp] : test::kinetic_battery()) {
        const auto analytic = master::stationary_distribution(kp).distribution;
        const auto a = ssa::stationary_histogram(kp, seed, 1'000'000, 0.1);
        const auto b = ssa::stationary_histogram(kp, seed, 1'000'000, 0.1);
        ++seed;
        ++regimes;
        const double tv = total_variation(a, analytic);
        worst = std::max(worst, tv);
        v.require(tv < 0.02, std::string(name) + " TV " + fmt("%.3g", tv));
        v.require(std::equal(a.probs().begin(), a.probs().end(), b.probs().begin(), b.probs().end()) &&
                      std::equal(a.support().begin(), a.support().end(), b.support().begin(), b.support().end()),
                  std::string(name) + " rerun differs");
    }
    if (v.pass) v.detail = std::to_string(regimes) + " regimes, max TV " + fmt("%.4f", worst) + ", reruns identical";
    return v;
}

Verdict cli_reproduce() {
    Verdict v;
    auto call = [](const std::vector<std::string>& args, std::string* out) {
        std::ostringstream o, e;
        const int code = cli::main_entry(args, o, e);
        *out = o.str();
        return code;
    };
    for (const std::string name : {"pbse-3.63", "pbse-4.9"}) {
        std::string out;
        const int code = call({"reproduce", "--case", name}, &out);
        v.require(code == 0 && out.find("\"verdict\": \"pass\"") != std::string::npos, name + " verdict not pass");
    }
    int goldens = 0;
    for (const auto& gc : test::golden_cases()) {
        std::ifstream in(std::filesystem::path(MEGSTAT_GOLDEN_DIR) / gc.file, std::ios::binary);
        std::ostringstream want;
        want << in.rdbuf();
        std::string first, second;
        call(gc.args, &first);
        call(gc.args, &second);
        ++goldens;
        v.require(!want.str().empty(), gc.file + " missing");
        v.require(first == want.str() && second == first, gc.file + " not byte-stable");
    }
    if (v.pass) v.detail = "both cases pass, " + std::to_string(goldens) + " golden files byte-identical";
    return v;
}

struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<Verdict()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "PbSe calibrated moments", 1.0, pbse_reproduction},
        {2, "sub-Poissonian and growing deviation", 5.0, non_poissonian},
        {3, "detailed balance gives Poisson", 5.0, detailed_balance},
        {4, "stationary law zeroes the master equation", 5.0, stationarity_oracle},
        {5, "extrema and fast-MEG root", 1.0, extrema},
        {6, "transient integration", 10.0, transient},
        {7, "SSA against the stationary law", 60.0, ssa_oracle},
        {8, "CLI reproduce verdicts and golden files", 60.0, cli_reproduce},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) v.require(false, "over time budget");
        std::printf("%s  %d  %-44s %7.3fs/%gs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    c.limit_s, v.detail.c_str());
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
