#include <iostream>
#include <string>
#include <vector>

#include "mir3d/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mir3d::cli::run_cli(args, std::cout, std::cerr);
}
