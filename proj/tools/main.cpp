#include "hopfvar/cli.hpp"

int main(int argc, char** argv) {
    return hopfvar::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
