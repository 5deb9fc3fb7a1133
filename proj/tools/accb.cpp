#include "accb/driver/driver.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return accb::driver::run_cli(argc, argv, std::cout, std::cerr);
}
