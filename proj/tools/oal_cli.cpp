#include <iostream>

#include "oal/cli.hpp"

int main(int argc, char** argv) { return oal::run_cli(argc, argv, std::cout, std::cerr); }
