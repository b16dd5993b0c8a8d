#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tmq::cli::run_main(argc, argv, std::cout, std::cerr); }
