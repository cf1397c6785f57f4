#include <iostream>

#include "pak/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pak::run_cli(args, std::cout, std::cerr);
}
