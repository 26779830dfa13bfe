#include <iostream>
#include <string>
#include <vector>

#include "mixchain/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mixchain::cli::run_cli(args, std::cout, std::cerr);
}
