#include "cli.hpp"

#include <cstdlib>
#include <iostream>

#include <unistd.h>

int main(int argc, char** argv)
{
    std::ios::sync_with_stdio(false);
    std::vector<std::string> args(argv, argv + argc);
    bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
    evlint::cli::Streams io{std::cout, std::cerr, color};
    try {
        return evlint::cli::run(args, io);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
