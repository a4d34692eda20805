#include <iostream>

#include "magcp/cli/commands.hpp"

int main(int argc, char** argv) {
    return magcp::cli::run_cli(argc, argv, std::cout, std::cerr);
}
