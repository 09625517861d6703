#include <iostream>

#include "hvertex/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hvertex::run_cli(args, std::cout, std::cerr);
}
