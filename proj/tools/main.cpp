#include <iostream>

#include "orbqfl/cli.hpp"

int main(int argc, char** argv) { return orbqfl::cli::run_cli(argc, argv, std::cout, std::cerr); }
