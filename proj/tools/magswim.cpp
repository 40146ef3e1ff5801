#include <iostream>

#include "magswim/cli.hpp"

int main(int argc, char** argv) { return magswim::run_cli(argc, argv, std::cout, std::cerr); }
