#include "dforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dforge::run_cli(argc, argv, std::cout, std::cerr); }
