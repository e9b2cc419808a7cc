#include <iostream>

#include "diagramcat/cli.hpp"

int main(int argc, char** argv) { return diagramcat::cli::run(argc, argv, std::cout, std::cerr); }
