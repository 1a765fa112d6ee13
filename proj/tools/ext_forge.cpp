#include <iostream>

#include "extforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return extforge::cli::run(args, std::cout, std::cerr);
}
