#include <cstdio>

#include "trappair/version.hpp"

int main() {
  std::printf("trappair %s (CLI under construction)\n", trappair::kVersion);
  return 0;
}
