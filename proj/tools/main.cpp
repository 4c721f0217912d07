#include <iostream>

#include "dbk/cli.hpp"

int main(int argc, char** argv) {
  return dbk::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
