#include <vector>

#include "mtcnn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mtcnn::run_cli(args);
}
