// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "megstat/cli.hpp"
#include "megstat/core_model.hpp"

namespace megstat::cli::detail {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

struct Provenance {
    std::optional<std::uint64_t> seed;
    bool randomized = false;
};

nlohmann::ordered_json provenance_json(const Provenance& p);
nlohmann::ordered_json moments_json(const MomentSummary& m);

/// `n,probability` rows followed by `# key=value` lines.
void write_distribution_csv(std::ostream& os, const DiscreteDistribution& d,
                            const std::vector<std::pair<std::string, std::string>>& footer);

/// Footer lines for the moments of `m` in a fixed order.
std::vector<std::pair<std::string, std::string>> moments_footer(const MomentSummary& m);

/// Footer lines naming the tool and, for seeded runs, the generator.
std::vector<std::pair<std::string, std::string>> provenance_footer(const Provenance& p);

nlohmann::ordered_json distribution_json(const DiscreteDistribution& d,
                                         nlohmann::ordered_json params,
                                         const Provenance& p);

nlohmann::ordered_json reproduction_json(const ReproductionReport& r);

}  // namespace megstat::cli::detail
