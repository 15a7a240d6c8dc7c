#include <vector>

#include "modecast/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modecast::cli::run(args);
}
