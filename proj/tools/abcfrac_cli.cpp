#include <iostream>

#include "abcfrac/cli.hpp"

int main(int argc, char** argv) {
  return abcfrac::cli::run(argc, argv, std::cout, std::cerr);
}
