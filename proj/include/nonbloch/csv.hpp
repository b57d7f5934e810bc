#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace nonbloch {

// Comma-separated output with a fixed header; reals use 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header);

  void row(const std::vector<double>& values);
  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

 private:
  std::ostream& os_;
  std::size_t columns_;
};

std::string format_g17(double v);

}  // namespace nonbloch
