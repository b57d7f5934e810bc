#include "nonbloch/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nonbloch {

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_g17(values[i]);
  os_ << '\n';
}

}  // namespace nonbloch
