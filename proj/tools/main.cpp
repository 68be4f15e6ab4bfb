#include <iostream>

#include "codedxbar/cli.hpp"

int main(int argc, char** argv) {
  return codedxbar::cli::run(argc, argv, std::cout, std::cerr);
}
