#include <iostream>
#include <string>
#include <vector>

#include "qfst/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qfst::execute_command(args, std::cout, std::cerr);
}
