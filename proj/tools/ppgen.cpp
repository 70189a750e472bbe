#include <iostream>

#include "ppgen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ppgen::cli::run(args, std::cout, std::cerr);
}
