#include "osva/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return osva::run_cli(argc, argv, std::cout, std::cerr); }
