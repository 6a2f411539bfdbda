#include <iostream>
#include <string>
#include <vector>

#include "godclass/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return godclass::cli::run(args, std::cout, std::cerr);
}
