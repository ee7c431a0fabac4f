#include <string>
#include <vector>

#include "gppde/bench.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gppde::cli_main(args);
}
