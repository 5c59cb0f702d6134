// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "qseries/cli.hpp"

int main(int argc, char** argv) { return qseries::run_cli(argc, argv, std::cout, std::cerr); }
