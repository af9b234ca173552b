#include <string>
#include <vector>

#include "mibe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mibe::run_cli(args);
}
