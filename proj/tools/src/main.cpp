#include <iostream>

#include "themelab/cli/app.hpp"

int main(int argc, char** argv) { return themelab::cli::main_entry(argc, argv, std::cout, std::cerr); }
