#include <vector>

#include "kza/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kza::run_cli(args);
}
