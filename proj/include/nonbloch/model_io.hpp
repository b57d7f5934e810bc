#pragma once

// Model-definition text format.
//
//   # comment
//   q = 2
//   rho[0]    = 2
//   theta[1]  = 1.6, 0
//   phi[-1]   = 0.4, 0.0
//   example   = 2, 0.4, 1, 0.6     # Delta, t0, t, delta
//
// Complex values are written `re,im` (a bare `re` means im = 0). `example`
// expands through example_model() and may be combined with explicit
// couplings, which are applied on top of it. `q` defaults to 1 when
// `example` is present and is required otherwise.

#include <string>
#include <string_view>
#include <vector>

#include "nonbloch/model.hpp"

namespace nonbloch {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// Splits `key = value` lines, dropping blanks and `#` comments. Throws
// ConfigError on a line without `=`.
std::vector<KeyValue> split_key_values(std::string_view text);

double parse_real(std::string_view text, std::string_view key);
cplx parse_complex(std::string_view text, std::string_view key);
std::vector<double> parse_real_list(std::string_view text, std::string_view key);

// Builds a model from entries whose keys have already had any section prefix
// removed. Unknown keys are rejected.
LatticeModel model_from_entries(const std::vector<KeyValue>& entries);

LatticeModel parse_model(std::string_view text);
LatticeModel load_model_file(const std::string& path);

// Writes every nonzero coupling explicitly, one `prefix key = re,im` per line.
std::string format_model(const LatticeModel& model, std::string_view prefix = "");

// Shortest round-trip decimal form.
std::string format_real(double v);

}  // namespace nonbloch
