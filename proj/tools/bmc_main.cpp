#include "bmc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string out;
    const int rc = bmc::run_cli(args, out);
    std::cout << out;
    return rc;
}
