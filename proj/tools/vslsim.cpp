#include <string>
#include <vector>

#include "vsl/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vsl::run(args);
}
