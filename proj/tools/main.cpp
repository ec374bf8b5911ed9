#include <iostream>

#include "poemdiv/cli.hpp"

int main(int argc, char** argv) {
  return poemdiv::cli_main(argc, argv, std::cout, std::cerr);
}
