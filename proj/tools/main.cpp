#include <iostream>
#include <string>
#include <vector>

#include "lifshitz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lifshitz::cli::run(args, std::cout, std::cerr);
}
