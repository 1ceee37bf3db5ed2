#include <iostream>

#include "mstproj/cli.hpp"

int main(int argc, char** argv) { return mstproj::cli::main_with_args(argc, argv, std::cout, std::cerr); }
