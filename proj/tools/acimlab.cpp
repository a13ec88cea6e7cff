#include <iostream>

#include "acimlab/cli.hpp"

int main(int argc, char** argv) { return acimlab::cli::main(argc, argv, std::cout, std::cerr); }
