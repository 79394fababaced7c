#include <iostream>

#include "byos/cli/commands.hpp"

int main(int argc, char** argv) { return byos::cli::run(argc, argv, std::cout, std::cerr); }
