#include "flunow/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return flunow::cli::run(argc, argv, std::cout, std::cerr); }
