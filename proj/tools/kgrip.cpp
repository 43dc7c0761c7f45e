#include <iostream>

#include "kgrip/cli.hpp"

int main(int argc, char** argv) { return kgrip::run_cli(argc, argv, std::cout, std::cerr); }
