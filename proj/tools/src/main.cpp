#include <iostream>

#include "minkval_cli/commands.hpp"

int main(int argc, char** argv) { return minkval::cli::run_cli(argc, argv, std::cout, std::cerr); }
