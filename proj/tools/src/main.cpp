#include <iostream>
#include <string>
#include <vector>

#include "nlclaw_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nlclaw::cli::dispatch(args, std::cout, std::cerr);
}
