#include <iostream>

#include "tilr/cli.hpp"

int main(int argc, char** argv) { return tilr::run_cli(argc, argv, std::cout, std::cerr); }
