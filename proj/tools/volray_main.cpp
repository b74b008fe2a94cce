// Copyright 2026 The volray Authors
// SPDX-License-Identifier: Apache-2.0
#include <volray/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    return volray::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
