#include <iostream>

#include "liederiv/cli.hpp"

int main(int argc, char** argv) {
  auto r = liederiv::run_cli(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
