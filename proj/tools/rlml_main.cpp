#include <iostream>
#include <string>
#include <vector>

#include "rlml/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rlml::cli::run_cli(args, std::cout, std::cerr);
}
