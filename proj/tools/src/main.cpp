#include "subtrack/bench/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return subtrack::bench::cli_main(argc, argv, std::cout, std::cerr);
}
