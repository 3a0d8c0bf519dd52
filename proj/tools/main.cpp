#include <iostream>
#include <string>
#include <vector>

#include "subcert/cli.hpp"

int main(int argc, char** argv) {
  return subcert::cli::run(std::vector<std::string>(argv + 1, argv + argc),
                           std::cout, std::cerr);
}
