#include <vector>

#include "convexity/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return convexity::cli::run(std::move(args));
}
