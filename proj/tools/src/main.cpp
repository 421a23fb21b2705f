// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cfonet::cli::run(argc, argv, std::cout, std::cerr); }
