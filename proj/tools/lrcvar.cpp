#include "lrcvar/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lrcvar::run_cli(argc, argv, std::cout, std::cerr); }
