// SPDX-License-Identifier: Apache-2.0

#include "wvqp_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wvqp::cli::run_cli(argc, argv, std::cout, std::cerr); }
