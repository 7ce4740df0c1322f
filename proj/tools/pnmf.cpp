#include <iostream>
#include <string>
#include <vector>

#include "pnmf/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pnmf::app::run(args, std::cout, std::cerr);
}
