#include "spmdlens/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spmdlens::run_cli(argc, argv, std::cout, std::cerr); }
