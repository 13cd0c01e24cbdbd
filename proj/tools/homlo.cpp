#include <iostream>

#include "homlo/cli.hpp"

int main(int argc, char** argv) { return homlo::cli::run(argc, argv, std::cout, std::cerr); }
