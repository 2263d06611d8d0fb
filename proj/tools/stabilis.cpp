#include "stabilis/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stabilis::cli::run_cli(argc, argv, std::cout, std::cerr); }
