#include <iostream>

#include "zeno/cli.hpp"

int main(int argc, char** argv) { return zeno::run_cli(argc, argv, std::cout, std::cerr); }
