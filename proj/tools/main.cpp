#include <iostream>

#include "geolens/cli.hpp"

int main(int argc, char** argv) { return geolens::run_cli(argc, argv, std::cout, std::cerr); }
