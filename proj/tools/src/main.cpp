#include <iostream>

#include "soergel/cli.hpp"

int main(int argc, char** argv) {
  return soergel::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
