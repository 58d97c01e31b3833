#include <iostream>

#include "salab/cli.hpp"

int main(int argc, char** argv) { return salab::cli::run(argc, argv, std::cout, std::cerr); }
