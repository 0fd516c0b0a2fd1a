#include <iostream>

#include "rmt/cli.hpp"

int main(int argc, char** argv) {
  return rmt::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
