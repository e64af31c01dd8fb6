#include <iostream>

#include "hif/cli_runner.hpp"

int main(int argc, char** argv) { return hif::cli::run(argc, argv, std::cout, std::cerr); }
