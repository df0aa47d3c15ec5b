// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "evalagent/cli_app.hpp"

int main(int argc, char** argv) {
    return evalagent::run_cli(argc, argv, std::cout, std::cerr);
}
