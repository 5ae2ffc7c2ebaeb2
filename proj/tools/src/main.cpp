#include "kvnlab_cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return kvnlab::cli::main_with_args(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
