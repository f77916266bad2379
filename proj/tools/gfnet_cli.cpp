#include <iostream>

#include "gfnet/cli.hpp"

int main(int argc, char** argv) { return gfnet::run_cli(argc, argv, std::cout, std::cerr); }
