#include <string>
#include <vector>

#include "proxsamp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return proxsamp::cli::run_command(args);
}
