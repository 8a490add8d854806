#include <iostream>

#include "inkmetrics/cli.hpp"

int main(int argc, char** argv) { return inkmetrics::run_cli(argc, argv, std::cout, std::cerr); }
