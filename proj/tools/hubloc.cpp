#include <iostream>

#include "hubloc/commands.hpp"

int main(int argc, char** argv) { return hubloc::cli::run(argc, argv, std::cout, std::cerr); }
