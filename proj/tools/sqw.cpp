// sqw.cpp — command-line entry point
#include "sqw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sqw::cli::run(args);
}
