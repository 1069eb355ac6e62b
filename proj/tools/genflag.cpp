#include <iostream>

#include "genflag/genflag.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto res = genflag::run_command(args);
  std::cout << res.out;
  return res.code;
}
