#include <string>
#include <vector>

#include "lcdk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lcdk::cli::run(args);
}
