#include <iostream>
#include <string>
#include <vector>

#include "fadjoint/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fadjoint::cli::run(args, std::cout, std::cerr);
}
