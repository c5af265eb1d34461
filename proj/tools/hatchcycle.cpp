#include <iostream>

#include "hatchcycle/cli.hpp"

int main(int argc, char** argv) { return hatchcycle::run_cli(argc, argv, std::cout, std::cerr); }
