#include <iostream>

#include "marchuk_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return marchuk::cli::run(args, std::cout, std::cerr);
}
