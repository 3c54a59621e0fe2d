#include <iostream>

#include "iaswipt/runner.hpp"

int main(int argc, char** argv) { return iaswipt::run_cli(argc, argv, std::cout, std::cerr); }
