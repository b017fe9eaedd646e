#include <iostream>

#include "ht/cli.hpp"

int main(int argc, char** argv) {
  return ht::cli::run_command(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
