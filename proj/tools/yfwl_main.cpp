#include "yfwl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  yfwl::cli::RunConfig config;
  if (auto code = yfwl::cli::parse_args(argc, argv, config, std::cout, std::cerr)) return *code;
  return yfwl::cli::run(config, std::cout, std::cerr);
}
