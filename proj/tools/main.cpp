#include <iostream>
#include <string>
#include <vector>

#include "lsub/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lsub::run(args, std::cout, std::cerr);
}
