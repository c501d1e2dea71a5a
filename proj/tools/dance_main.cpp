#include <iostream>

#include "dance/cli.hpp"

int main(int argc, char** argv) { return dance::run_cli(argc, argv, std::cout, std::cerr); }
