#include <iostream>

#include "mlap/cli/commands.hpp"

int main(int argc, char** argv) { return mlap::cli::run(argc, argv, std::cout, std::cerr); }
