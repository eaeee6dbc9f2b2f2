#include "hzeta_cli.hpp"

int main(int argc, char** argv) {
  return hzeta::cli::run(argc, argv, std::cout, std::cerr);
}
