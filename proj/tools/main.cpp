#include <iostream>
#include <string>
#include <vector>

#include "presburger/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return presburger::runCli(args, std::cout, std::cerr);
}
