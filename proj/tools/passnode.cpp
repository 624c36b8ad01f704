#include <iostream>

#include "passnode/cli.hpp"

int main(int argc, char** argv) { return passnode::run_cli(argc, argv, std::cout, std::cerr); }
