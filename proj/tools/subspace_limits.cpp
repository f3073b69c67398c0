#include <iostream>

#include "sublim/cli.hpp"

int main(int argc, char** argv) { return sublim::cli::main_entry(argc, argv, std::cout, std::cerr); }
