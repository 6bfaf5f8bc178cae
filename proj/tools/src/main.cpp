#include <iostream>

#include "hiddentime/cli/run.hpp"

int main(int argc, char** argv) {
  return hiddentime::cli::main_entry(argc, argv, std::cout, std::cerr);
}
