#include <iostream>

#include "stoprule/cli.hpp"

int main(int argc, char** argv) {
  return stoprule::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
