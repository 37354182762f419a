#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ak/cli.hpp"

int main(int argc, char** argv) {
  const char* mode = std::getenv("AK_COLOR");
  bool color = (mode == nullptr || std::string(mode) == "auto") && isatty(STDOUT_FILENO);
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return ak::cli::run(std::move(args), std::cout, std::cerr, color);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
