#include <iostream>
#include <string>
#include <vector>

#include "orthoplanar/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return orthoplanar::cli::run(args, std::cout, std::cerr);
}
