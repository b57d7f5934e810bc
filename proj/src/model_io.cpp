#include "nonbloch/model_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "nonbloch/error.hpp"

namespace nonbloch {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Parses `name[l]`; returns nullopt when the key has another shape.
std::optional<std::pair<std::string, int>> indexed_key(std::string_view key) {
  const auto open = key.find('[');
  if (open == std::string_view::npos || key.back() != ']') return std::nullopt;
  const auto inner = key.substr(open + 1, key.size() - open - 2);
  int l = 0;
  auto s = trim(inner);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), l);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return std::make_pair(std::string(trim(key.substr(0, open))), l);
}

}  // namespace

std::vector<KeyValue> split_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`, got `" +
                        std::string(line) + "`");
    out.push_back({std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                   line_no});
  }
  return out;
}

double parse_real(std::string_view text, std::string_view key) {
  if (auto v = to_double(text)) return *v;
  throw ConfigError("key `" + std::string(key) + "`: expected a real number, got `" +
                    std::string(text) + "`");
}

cplx parse_complex(std::string_view text, std::string_view key) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {parse_real(text, key), 0.0};
  const auto re = to_double(text.substr(0, comma));
  const auto im = to_double(text.substr(comma + 1));
  if (!re || !im)
    throw ConfigError("key `" + std::string(key) + "`: expected `re,im`, got `" +
                      std::string(text) + "`");
  return {*re, *im};
}

std::vector<double> parse_real_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_real(piece, key));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

LatticeModel model_from_entries(const std::vector<KeyValue>& entries) {
  std::optional<int> q;
  std::optional<std::vector<double>> example;
  struct Coupling {
    std::string name;
    int l;
    cplx value;
    const KeyValue* src;
  };
  std::vector<Coupling> couplings;

  for (const auto& kv : entries) {
    if (kv.key == "q") {
      const double v = parse_real(kv.value, kv.key);
      if (v < 1 || v != std::floor(v))
        throw ConfigError("key `q`: hopping range must be a positive integer");
      q = static_cast<int>(v);
    } else if (kv.key == "example") {
      auto vals = parse_real_list(kv.value, kv.key);
      if (vals.size() != 4)
        throw ConfigError("key `example`: expected `Delta, t0, t, delta` (4 values)");
      example = std::move(vals);
    } else if (auto idx = indexed_key(kv.key);
               idx && (idx->first == "rho" || idx->first == "theta" || idx->first == "phi")) {
      couplings.push_back({idx->first, idx->second, parse_complex(kv.value, kv.key), &kv});
    } else {
      throw ConfigError("unknown model key `" + kv.key + "` (line " + std::to_string(kv.line) +
                        ")");
    }
  }

  if (!q && !example) throw ConfigError("model: missing key `q` (or `example`)");
  const int range = q.value_or(1);
  LatticeModel model(range);
  if (example) {
    const auto& e = *example;
    const LatticeModel base = example_model(e[0], e[1], e[2], e[3]);
    for (int l = -1; l <= 1; ++l) {
      model.set_rho(l, base.rho(l));
      model.set_theta(l, base.theta(l));
      model.set_phi(l, base.phi(l));
    }
  }
  for (const auto& c : couplings) {
    if (c.l < -range || c.l > range)
      throw ConfigError("key `" + c.src->key + "`: offset outside [-q, q] with q = " +
                        std::to_string(range));
    if (c.name == "rho") model.set_rho(c.l, c.value);
    else if (c.name == "theta") model.set_theta(c.l, c.value);
    else model.set_phi(c.l, c.value);
  }
  return model;
}

LatticeModel parse_model(std::string_view text) { return model_from_entries(split_key_values(text)); }

LatticeModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_model(const LatticeModel& model, std::string_view prefix) {
  std::ostringstream os;
  const std::string p(prefix);
  os << p << "q = " << model.range() << '\n';
  auto emit = [&](const char* name, auto getter) {
    for (int l = -model.range(); l <= model.range(); ++l) {
      const cplx v = getter(l);
      if (v == cplx{}) continue;
      os << p << name << '[' << l << "] = " << format_real(v.real()) << ','
         << format_real(v.imag()) << '\n';
    }
  };
  emit("rho", [&](int l) { return model.rho(l); });
  emit("theta", [&](int l) { return model.theta(l); });
  emit("phi", [&](int l) { return model.phi(l); });
  return os.str();
}

}  // namespace nonbloch
