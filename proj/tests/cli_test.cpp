// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "golden_cases.hpp"
#include "megstat/cli.hpp"

namespace megstat::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    return fs::temp_directory_path() / ("megstat_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Parse, EmptyArgvIsUsage) {
    const auto r = invoke({});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_NE(r.err.find("ERROR USAGE"), std::string::npos);
}

TEST(Parse, EpsilonGuard) {
    const auto p = parse_config({"stat", "--epsilon", "0.5", "--g", "1"});
    EXPECT_FALSE(p.config);
    EXPECT_EQ(p.exit_code, kExitUsage);
    EXPECT_EQ(p.message, "epsilon must exceed 1");
    EXPECT_EQ(invoke({"--epsilon", "0.5"}).code, kExitUsage);
}

TEST(Parse, StatFlags) {
    const auto p = parse_config({"stat", "--epsilon", "3.63", "--g", "132.66", "--format", "json"});
    ASSERT_TRUE(p.config);
    EXPECT_EQ(p.config->mode, Mode::Stat);
    EXPECT_EQ(p.config->format, Format::Json);
    EXPECT_EQ(*p.config->epsilon, 3.63);
    EXPECT_EQ(*p.config->g, 132.66);
}

TEST(Parse, EvolveTimes) {
    const auto p = parse_config({"evolve", "--k2", "1", "--km2AV", "3", "--n-max", "30", "--times", "0,0.5,2"});
    ASSERT_TRUE(p.config);
    EXPECT_EQ(p.config->times, (std::vector<double>{0.0, 0.5, 2.0}));
    EXPECT_EQ(p.config->n_max, 30);
    EXPECT_EQ(p.config->format, Format::Csv);
}

TEST(Parse, UsageErrors) {
    EXPECT_EQ(parse_config({"bogus"}).exit_code, kExitUsage);
    EXPECT_EQ(parse_config({"stat", "--epsilon", "3"}).exit_code, kExitUsage);
    EXPECT_EQ(parse_config({"stat", "--epsilon", "3", "--g", "2", "--format", "xml"}).exit_code, kExitUsage);
    EXPECT_EQ(parse_config({"reproduce", "--case", "cdse"}).exit_code, kExitUsage);
    EXPECT_EQ(parse_config({"ssa", "--k2", "1", "--events", "10"}).exit_code, kExitUsage);
}

TEST(Parse, HelpExitsCleanly) {
    const auto r = invoke({"stat", "--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("--epsilon"), std::string::npos);
}

TEST(Config, FlagOverridesFile) {
    const auto path = scratch("override.json");
    std::ofstream(path) << R"({"mode": "stat", "epsilon": 4.9, "g": 10, "format": "json"})";
    const auto p = parse_config({"stat", "--config", path.string(), "--g", "133"});
    fs::remove(path);
    ASSERT_TRUE(p.config) << p.message;
    EXPECT_EQ(*p.config->g, 133.0);
    EXPECT_EQ(*p.config->epsilon, 4.9);
    EXPECT_EQ(p.config->format, Format::Json);
}

TEST(Config, UnknownKeyIsNamed) {
    const auto path = scratch("unknown.json");
    std::ofstream(path) << R"({"epsilon": 4.9, "g": 10, "temperature": 300})";
    const auto p = parse_config({"stat", "--config", path.string()});
    fs::remove(path);
    EXPECT_EQ(p.exit_code, kExitUsage);
    EXPECT_NE(p.message.find("temperature"), std::string::npos);
}

TEST(Config, ModeMustMatch) {
    const auto path = scratch("mode.json");
    std::ofstream(path) << R"({"mode": "ssa"})";
    const auto p = parse_config({"stat", "--config", path.string(), "--epsilon", "3", "--g", "2"});
    fs::remove(path);
    EXPECT_EQ(p.exit_code, kExitUsage);
}

TEST(Run, NonNormalizableIsDomainError) {
    const auto r = invoke({"stationary", "--k1A", "2", "--km1", "0", "--k2", "1", "--km2AV", "0.5", "--V", "1"});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_EQ(r.err.rfind("ERROR NON_NORMALIZABLE: ", 0), 0u) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Run, UnreachableCalibrationIsDomainError) {
    const auto r = invoke({"calibrate", "--epsilon", "3.63", "--target-mean", "9"});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_EQ(r.err.rfind("ERROR UNREACHABLE: ", 0), 0u) << r.err;
}

TEST(Run, StatCsvLayout) {
    const auto r = invoke({"stat", "--epsilon", "3.63", "--g", "132.66", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("n,probability\n2,", 0), 0u);
    EXPECT_NE(r.out.find("\n# mean="), std::string::npos);
    EXPECT_NE(r.out.find("\n# second_moment="), std::string::npos);
}

TEST(Run, WritesOutputFile) {
    const auto path = scratch("out.csv");
    const auto r = invoke({"stat", "--epsilon", "3.63", "--g", "132.66", "-o", path.string()});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(path), invoke({"stat", "--epsilon", "3.63", "--g", "132.66"}).out);
    fs::remove(path);
}

TEST(Run, ReproduceVerdicts) {
    for (const std::string name : {"pbse-3.63", "pbse-4.9"}) {
        const auto r = invoke({"reproduce", "--case", name});
        ASSERT_EQ(r.code, kExitOk) << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j.at("verdict"), "pass") << name;
        EXPECT_GT(j.at("params").at("g").get<double>(), 0.0);
        EXPECT_TRUE(j.at("moments").contains("poisson_deviation"));
    }
}

double csv_mass(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    double total = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        total += std::stod(line.substr(line.rfind(',') + 1));
    }
    return total;
}

double json_mass(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto& probs = j.at("probs");
    const auto v = probs.get<std::vector<double>>();
    return std::accumulate(v.begin(), v.end(), 0.0);
}

class Golden : public ::testing::TestWithParam<test::GoldenCase> {};

TEST_P(Golden, ByteStable) {
    const auto& gc = GetParam();
    const fs::path path = fs::path(MEGSTAT_GOLDEN_DIR) / gc.file;
    const auto first = invoke(gc.args);
    ASSERT_EQ(first.code, kExitOk) << first.err;
    if (std::getenv("MEGSTAT_UPDATE_GOLDEN") != nullptr) {
        std::ofstream(path, std::ios::binary) << first.out;
    }
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(first.out, slurp(path));
    EXPECT_EQ(invoke(gc.args).out, first.out);
}

TEST_P(Golden, DistributionsResumToOne) {
    const auto& gc = GetParam();
    if (!gc.is_distribution) GTEST_SKIP();
    const auto r = invoke(gc.args);
    ASSERT_EQ(r.code, kExitOk);
    const double mass = gc.file.ends_with(".json") ? json_mass(r.out) : csv_mass(r.out);
    EXPECT_NEAR(mass, 1.0, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(test::golden_cases()),
                         [](const auto& info) { return info.param.label; });

}  // namespace
}  // namespace megstat::cli
