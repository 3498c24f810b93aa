#include <iostream>

#include "fxlab/cli.hpp"

int main(int argc, char** argv) { return fxlab::cli_main(argc, argv, std::cout, std::cerr); }
