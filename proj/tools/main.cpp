#include <iostream>

#include "qdisc/cli.hpp"

int main(int argc, char** argv) { return qdisc::run_cli(argc, argv, std::cout, std::cerr); }
