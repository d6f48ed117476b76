#include <iostream>

#include "dimlab/cli.hpp"

int main(int argc, char** argv) { return dimlab::cli_main(argc, argv, std::cout, std::cerr); }
