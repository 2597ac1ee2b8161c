#include <iostream>
#include <string>
#include <vector>

#include "tdec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tdec::cli::run(args, std::cout, std::cerr);
}
