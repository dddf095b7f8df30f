#include <iostream>

#include "orthokin/cli/app.hpp"

int main(int argc, char** argv) {
  return orthokin::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
