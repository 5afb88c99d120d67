#include <iostream>

#include "ratpencil/cli.hpp"

int main(int argc, char** argv) { return ratpencil::run_cli(argc, argv, std::cout, std::cerr); }
