#pragma once

#include <string>
#include <vector>

namespace liederiv {

struct CliOutput {
  int code = 0;  // 0 ok, 1 syntax, 2 precondition, 3 verification failure
  std::string out;
  std::string err;
};

// Runs one command line (without the program name) and captures its output.
CliOutput run_cli(std::vector<std::string> args);

}  // namespace liederiv
