#include "sasm/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return sasm::runCli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
