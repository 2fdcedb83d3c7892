#include <iostream>

#include "powsec/commands.hpp"

int main(int argc, char** argv) { return powsec::cli::run_cli(argc, argv, std::cout, std::cerr); }
