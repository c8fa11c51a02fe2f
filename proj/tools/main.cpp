#include <iostream>

#include "humanoid/cli.hpp"

int main(int argc, char** argv) { return humanoid::run_cli(argc, argv, std::cout, std::cerr); }
