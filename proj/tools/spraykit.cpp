#include <iostream>
#include <string>

#include "spraykit/cli.hpp"

int main(int argc, char** argv) {
  std::string out, err;
  const int code = spraykit::cli::run(argc, argv, out, err);
  std::cout << out;
  std::cerr << err;
  return code;
}
