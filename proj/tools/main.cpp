#include <iostream>

#include "dispersal/cli/cli.h"

int main(int argc, char** argv) { return dispersal::cli::run(argc, argv, std::cout, std::cerr); }
