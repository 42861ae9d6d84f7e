#include "chowcensus/cli.hpp"

int main(int argc, char** argv) {
    return chowcensus::cli::run(argc, argv, std::cout, std::cerr);
}
