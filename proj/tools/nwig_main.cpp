#include <string>
#include <vector>

#include "nwig/run.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nwig::cli_main(args);
}
