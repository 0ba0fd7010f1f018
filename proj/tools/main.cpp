#include <iostream>

#include "pointillist/cli.hpp"

int main(int argc, char** argv) {
  return pointillist::run_cli(argc, argv, std::cout, std::cerr);
}
