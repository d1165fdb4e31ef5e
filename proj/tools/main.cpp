#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  return chorale::cli::run(argc, argv, chorale::cli::Streams{std::cout, std::cerr});
}
