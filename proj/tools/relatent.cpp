#include <iostream>
#include <string>
#include <vector>

#include "relatent/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return relatent::cli_main(args, std::cout, std::cerr);
}
