// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "ssrf/cli.hpp"

int main(int argc, char** argv) { return ssrf::cli::main(argc, argv, std::cout, std::cerr); }
