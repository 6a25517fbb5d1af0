#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return gridv2g::cli::run(argc, argv, std::cout, std::cerr);
}
