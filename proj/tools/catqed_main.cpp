#include <iostream>

#include "catqed/cli/run.hpp"

int main(int argc, char** argv) {
    return catqed::cli::main_entry(argc, argv, std::cout, std::cerr);
}
