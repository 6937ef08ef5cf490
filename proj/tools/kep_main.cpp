#include <iostream>

#include "kep/cli.hpp"

int main(int argc, char** argv) {
  return kep::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
