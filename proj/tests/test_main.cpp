#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "spoilage/runtime.hpp"

int main(int argc, char** argv) {
  spoilage::tune_allocator();
  doctest::Context context(argc, argv);
  return context.run();
}
