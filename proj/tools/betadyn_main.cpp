#include <iostream>

#include "betadyn/cli.hpp"

int main(int argc, char** argv) {
    return betadyn::cli::run(argc, argv, std::cout, std::cerr);
}
