#include <zdadapt/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return zdadapt::cli::run_cli(argc, argv, std::cout, std::cerr); }
