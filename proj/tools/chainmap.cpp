#include <iostream>

#include "chainmap_app.hpp"

int main(int argc, char** argv) { return chainmap::cli::run(argc, argv, std::cout, std::cerr); }
