#include <iostream>

#include "filmctl/cli.hpp"

int main(int argc, char** argv) { return filmctl::run_cli(argc, argv, std::cout, std::cerr); }
