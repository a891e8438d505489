#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return rkhs_embed::cli::run(argc, argv, std::cout, std::cerr); }
