#include <iostream>

#include "lamq_cli/cli.hpp"

int main(int argc, char** argv) { return lamq::cli::run(argc, argv, std::cout, std::cerr); }
