#include <iostream>
#include <string>
#include <vector>

#include "graphcake/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return graphcake::run_cli(args, std::cout, std::cerr);
}
