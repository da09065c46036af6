#include "equiteam/cli.hpp"

int main(int argc, char** argv) {
  return equiteam::run_cli(argc, argv);
}
