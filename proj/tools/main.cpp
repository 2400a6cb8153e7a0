#include "harness.hpp"

#include <iostream>

int main(int argc, char** argv) { return kaczlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
