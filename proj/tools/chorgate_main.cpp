#include <iostream>
#include <string>
#include <vector>

#include "chorgate/report/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return chorgate::cli::run(args, std::cout, std::cerr);
}
