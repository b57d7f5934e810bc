#pragma once

#include <string>
#include <vector>

#include "nonbloch/config.hpp"

namespace nonbloch {

struct OutputOptions {
  std::string out_dir = ".";
  bool svg = false;
  unsigned jobs = 1;
};

// Runs one configuration and returns the paths written.
std::vector<std::string> execute(const RunConfig& config, const OutputOptions& out);

// Full command line (argv[0] included). Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace nonbloch
