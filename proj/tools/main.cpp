#include <iostream>
#include <string>
#include <vector>

#include "dlap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dlap::cli::run(args, std::cout, std::cerr);
}
