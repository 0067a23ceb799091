#include <iostream>

#include "fraclab/cli.hpp"

int main(int argc, char** argv) { return fraclab::cli::run(argc, argv, std::cout, std::cerr); }
