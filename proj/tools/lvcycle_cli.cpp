#include <iostream>

#include "lvcycle/cli.hpp"

int main(int argc, char** argv) {
    return lvcycle::cli::run(argc, argv, std::cout, std::cerr);
}
