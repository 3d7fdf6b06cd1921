#include <iostream>
#include <string>
#include <vector>

#include "spoilage/cli.hpp"
#include "spoilage/runtime.hpp"

int main(int argc, char** argv) {
  spoilage::tune_allocator();
  std::vector<std::string> args(argv + 1, argv + argc);
  return spoilage::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
