#include <iostream>
#include <string>
#include <vector>

#include "qbell/cli.hpp"

int main(int argc, char** argv) {
  return qbell::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
