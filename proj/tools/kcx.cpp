#include <iostream>

#include "kcx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kcx::cli::run_command(args, std::cout, std::cerr);
}
