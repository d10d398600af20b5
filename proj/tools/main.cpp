#include <iostream>

#include "bugrank/cli.hpp"

int main(int argc, char** argv) {
  return bugrank::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
