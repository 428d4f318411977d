#include <iostream>
#include <string>
#include <vector>

#include "pdakit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pdakit::cli::run(args, std::cout, std::cerr);
}
