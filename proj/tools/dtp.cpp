#include "dtp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dtp::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
