#include <iostream>

#include "dispatch.hpp"

int main(int argc, char** argv) { return pretlab::cli::run(argc, argv, std::cout, std::cerr); }
