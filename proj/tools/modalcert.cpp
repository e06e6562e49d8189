#include <iostream>
#include <string>
#include <vector>

#include "modalcert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modalcert::run_cli(args, std::cout, std::cerr);
}
