// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "megstat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return megstat::cli::main_entry(args, std::cout, std::cerr);
}
