#include <iostream>

#include "nsalpha/cli.hpp"

int main(int argc, char** argv) { return nsalpha::cli_main(argc, argv, std::cout, std::cerr); }
