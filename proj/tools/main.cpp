#include <iostream>

#include "efista/commands.hpp"

int main(int argc, char** argv) { return efista::run_cli(argc, argv, std::cout, std::cerr); }
