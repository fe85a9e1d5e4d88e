#include <iostream>

#include "ptdeco/cli.hpp"

int main(int argc, char** argv) { return ptdeco::cli::run(argc, argv, std::cout, std::cerr); }
