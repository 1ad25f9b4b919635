#include <iostream>

#include "anyon/cli.hpp"

int main(int argc, char** argv) { return anyon::cli::run_cli(argc, argv, std::cout, std::cerr); }
