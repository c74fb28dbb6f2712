#include <iostream>

#include "hlsr/cli/commands.hpp"

int main(int argc, char** argv) { return hlsr::cli::main_entry(argc, argv, std::cout, std::cerr); }
