#include <iostream>

#include "timepref/cli.hpp"

int main(int argc, char** argv) { return timepref::run_cli(argc, argv, std::cout, std::cerr); }
