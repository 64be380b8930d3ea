#include <iostream>

#include "germforge/cli.hpp"

int main(int argc, char** argv) {
  return germforge::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
