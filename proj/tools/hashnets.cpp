#include <iostream>

#include "hashnets/interop/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hashnets::interop::run_cli(args, std::cout, std::cerr);
}
