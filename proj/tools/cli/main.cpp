#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) {
  return trispin::cli::run(argc, argv, std::cout, std::cerr);
}
