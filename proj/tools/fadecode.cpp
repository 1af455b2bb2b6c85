#include <vector>
#include <string>

#include "fadecode/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fadecode::run_cli(args);
}
