#include "subhc/io/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subhc::cli::dispatch(args);
}
