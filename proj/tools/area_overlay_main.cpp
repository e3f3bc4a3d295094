#include <iostream>
#include <string>
#include <vector>

#include "area_overlay/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return area_overlay::run_cli(args, std::cout, std::cerr);
}
