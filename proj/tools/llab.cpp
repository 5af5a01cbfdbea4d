#include <iostream>

#include "llab/cli.hpp"

int main(int argc, char** argv) { return llab::run_cli(argc, argv, std::cout, std::cerr); }
