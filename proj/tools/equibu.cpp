#include "equibu/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return equibu::cli::run(argc, argv, std::cout, std::cerr); }
