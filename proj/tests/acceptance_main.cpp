#include <cstdlib>
#include <iostream>

#include "trees/verify.hpp"

// Runs every acceptance suite; the exit code is the number of failures.
int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  return trees::run_verify({}, threads < 1 ? 1 : threads, std::cout);
}
