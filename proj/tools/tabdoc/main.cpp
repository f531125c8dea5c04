#include <iostream>

#include "tabdoc/cli/app.hpp"

int main(int argc, char** argv) {
  return tabdoc::cli::dispatch(argc, argv, tabdoc::cli::process_environment(), std::cout, std::cerr);
}
