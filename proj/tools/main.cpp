#include "hotspot/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hotspot::run_cli(argc, argv, std::cout, std::cerr); }
