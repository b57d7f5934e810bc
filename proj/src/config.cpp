#include "nonbloch/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nonbloch/error.hpp"
#include "nonbloch/model_io.hpp"

namespace nonbloch {

namespace {

constexpr std::string_view kCommands[] = {"bands", "gbz", "obc", "ws", "evolve", "sweep"};

int parse_int(const KeyValue& kv) {
  const double v = parse_real(kv.value, kv.key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("key `" + kv.key + "`: expected an integer, got `" + kv.value + "`");
  return static_cast<int>(v);
}

int parse_positive(const KeyValue& kv) {
  const int v = parse_int(kv);
  if (v < 1) throw ConfigError("key `" + kv.key + "`: must be >= 1");
  return v;
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
  throw ConfigError("key `" + kv.key + "`: expected true or false, got `" + kv.value + "`");
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
  return s;
}

bool same_couplings(const LatticeModel& x, const LatticeModel& y) {
  if (x.range() != y.range()) return false;
  for (int l = -x.range(); l <= x.range(); ++l)
    if (x.rho(l) != y.rho(l) || x.theta(l) != y.theta(l) || x.phi(l) != y.phi(l)) return false;
  return true;
}

std::string cplx_text(cplx z) { return format_real(z.real()) + ',' + format_real(z.imag()); }

// Keys for a ForceAxis named `stem` (e.g. F_over_E0 -> F_min_over_E0, F_max_over_E0).
std::pair<std::string, std::string> axis_bounds(std::string_view stem) {
  const std::string s(stem);
  const auto cut = s.find("_over");
  if (cut == std::string::npos) return {s + "_min", s + "_max"};
  return {s.substr(0, cut) + "_min" + s.substr(cut), s.substr(0, cut) + "_max" + s.substr(cut)};
}

// Handles the keys shared by every ForceAxis-shaped section.
bool axis_key(ForceAxis& a, const std::string& key, const KeyValue& kv, std::string_view stem) {
  const auto [lo, hi] = axis_bounds(stem);
  if (key == stem) a.values = parse_real_list(kv.value, kv.key);
  else if (key == lo) a.min = parse_real(kv.value, kv.key);
  else if (key == hi) a.max = parse_real(kv.value, kv.key);
  else if (key == "count") a.count = parse_positive(kv);
  else return false;
  return true;
}

void write_axis(std::ostream& os, const std::string& section, std::string_view stem, const ForceAxis& a) {
  if (!a.values.empty()) {
    os << section << '.' << stem << " = " << list(a.values) << '\n';
    return;
  }
  const auto [lo, hi] = axis_bounds(stem);
  os << section << '.' << lo << " = " << format_real(a.min) << '\n'
     << section << '.' << hi << " = " << format_real(a.max) << '\n'
     << section << ".count = " << a.count << '\n';
}

}  // namespace

std::vector<double> ForceAxis::expand() const {
  if (!values.empty()) return values;
  if (count == 1) return {min};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = min + (max - min) * i / (count - 1);
  return out;
}

bool valid_command(std::string_view cmd) {
  return std::find(std::begin(kCommands), std::end(kCommands), cmd) != std::end(kCommands);
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::vector<KeyValue> model_entries;
  for (const auto& kv : split_key_values(text)) {
    const auto dot = kv.key.find('.');
    if (dot == std::string::npos)
      throw ConfigError("key `" + kv.key + "` (line " + std::to_string(kv.line) + ") lacks a `section.` prefix");
    const std::string sec = kv.key.substr(0, dot);
    const std::string key = kv.key.substr(dot + 1);
    bool ok = true;
    if (sec == "model") {
      KeyValue inner = kv;
      inner.key = key;
      if (key == "example") {
        const auto v = parse_real_list(kv.value, kv.key);
        if (v.size() != 4) throw ConfigError("key `model.example`: expected `Delta, t0, t, delta`");
        c.example = std::array<double, 4>{v[0], v[1], v[2], v[3]};
      }
      model_entries.push_back(std::move(inner));
    } else if (sec == "run") {
      if (key == "command") {
        if (!valid_command(kv.value)) throw ConfigError("key `run.command`: unknown command `" + kv.value + "`");
        c.command = kv.value;
      } else if (key == "name") {
        c.name = kv.value;
      } else {
        ok = false;
      }
    } else if (sec == "bands") {
      if (key == "samples") c.bands.samples = parse_positive(kv);
      else ok = false;
    } else if (sec == "gbz") {
      auto& g = c.gbz;
      if (key == "center") g.center = parse_complex(kv.value, kv.key);
      else if (key == "half_width") g.half_width = parse_real(kv.value, kv.key);
      else if (key == "half_height") g.half_height = parse_real(kv.value, kv.key);
      else if (key == "n_re") g.n_re = parse_positive(kv);
      else if (key == "n_im") g.n_im = parse_positive(kv);
      else if (key == "coarse_tol") g.coarse_tol = parse_real(kv.value, kv.key);
      else if (key == "residual_tol") g.residual_tol = parse_real(kv.value, kv.key);
      else if (key == "collapse_tol") g.collapse_tol = parse_real(kv.value, kv.key);
      else ok = false;
    } else if (sec == "obc") {
      if (key == "N") c.obc.N = parse_positive(kv);
      else ok = false;
    } else if (sec == "ws") {
      if (key == "steps") c.ws.steps = parse_positive(kv);
      else ok = axis_key(c.ws.F_over_E0, key, kv, "F_over_E0");
    } else if (sec == "evolve") {
      auto& e = c.evolve;
      if (key == "F_over_E0") e.F_over_E0 = parse_real(kv.value, kv.key);
      else if (key == "N") e.N = parse_positive(kv);
      else if (key == "w") e.w = parse_real(kv.value, kv.key);
      else if (key == "k0") e.k0 = parse_real(kv.value, kv.key);
      else if (key == "sublattice") {
        if (kv.value == "A") e.sublattice = Sublattice::A;
        else if (kv.value == "B") e.sublattice = Sublattice::B;
        else throw ConfigError("key `evolve.sublattice`: expected A or B, got `" + kv.value + "`");
      } else if (key == "horizon_tB") e.horizon_tB = parse_real(kv.value, kv.key);
      else if (key == "dt") e.dt = parse_real(kv.value, kv.key);
      else if (key == "samples_per_tB") e.samples_per_tB = parse_positive(kv);
      else if (key == "snapshot_every") e.snapshot_every = parse_int(kv);
      else if (key == "error_estimate") e.error_estimate = parse_bool(kv);
      else if (key == "two_level") e.two_level = parse_bool(kv);
      else ok = false;
    } else if (sec == "sweep") {
      auto& s = c.sweep;
      if (key == "axis") {
        if (kv.value != "F" && kv.value != "delta")
          throw ConfigError("key `sweep.axis`: expected F or delta, got `" + kv.value + "`");
        s.axis = kv.value;
      } else if (key == "F_over_E0") s.F_over_E0 = parse_real(kv.value, kv.key);
      else if (key == "steps") s.steps = parse_positive(kv);
      else ok = axis_key(s.values, key, kv, "values");
    } else {
      ok = false;
    }
    if (!ok) throw ConfigError("unknown key `" + kv.key + "` (line " + std::to_string(kv.line) + ")");
  }
  if (!model_entries.empty()) c.model = model_from_entries(model_entries);
  if (c.name.empty()) c.name = c.command;
  if (c.sweep.axis == "delta" && !c.example)
    throw ConfigError("sweep.axis = delta needs the model given as `model.example`");
  return c;
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  if (!c.command.empty()) os << "run.command = " << c.command << '\n';
  if (!c.name.empty()) os << "run.name = " << c.name << '\n';
  if (c.example) os << "model.example = " << list({c.example->begin(), c.example->end()}) << '\n';
  // Explicit couplings only when they add something to the example expansion.
  if (c.model && !(c.example && same_couplings(*c.model, example_model((*c.example)[0], (*c.example)[1],
                                                                        (*c.example)[2], (*c.example)[3]))))
    os << format_model(*c.model, "model.");
  os << "bands.samples = " << c.bands.samples << '\n';
  const auto& g = c.gbz;
  os << "gbz.center = " << cplx_text(g.center) << '\n'
     << "gbz.half_width = " << format_real(g.half_width) << '\n'
     << "gbz.half_height = " << format_real(g.half_height) << '\n'
     << "gbz.n_re = " << g.n_re << '\n'
     << "gbz.n_im = " << g.n_im << '\n'
     << "gbz.coarse_tol = " << format_real(g.coarse_tol) << '\n'
     << "gbz.residual_tol = " << format_real(g.residual_tol) << '\n'
     << "gbz.collapse_tol = " << format_real(g.collapse_tol) << '\n';
  os << "obc.N = " << c.obc.N << '\n';
  write_axis(os, "ws", "F_over_E0", c.ws.F_over_E0);
  os << "ws.steps = " << c.ws.steps << '\n';
  const auto& e = c.evolve;
  os << "evolve.F_over_E0 = " << format_real(e.F_over_E0) << '\n'
     << "evolve.N = " << e.N << '\n'
     << "evolve.w = " << format_real(e.w) << '\n'
     << "evolve.k0 = " << format_real(e.k0) << '\n'
     << "evolve.sublattice = " << (e.sublattice == Sublattice::A ? "A" : "B") << '\n'
     << "evolve.horizon_tB = " << format_real(e.horizon_tB) << '\n'
     << "evolve.dt = " << format_real(e.dt) << '\n'
     << "evolve.samples_per_tB = " << e.samples_per_tB << '\n'
     << "evolve.snapshot_every = " << e.snapshot_every << '\n'
     << "evolve.error_estimate = " << (e.error_estimate ? "true" : "false") << '\n'
     << "evolve.two_level = " << (e.two_level ? "true" : "false") << '\n';
  const auto& s = c.sweep;
  os << "sweep.axis = " << s.axis << '\n';
  write_axis(os, "sweep", "values", s.values);
  os << "sweep.F_over_E0 = " << format_real(s.F_over_E0) << '\n'
     << "sweep.steps = " << s.steps << '\n';
  return os.str();
}

namespace {

struct PresetDef {
  std::string_view name;
  std::vector<std::string_view> parts;  // names of single-run presets, or empty
  std::string_view text;
};

const std::vector<PresetDef>& presets() {
  static const std::vector<PresetDef> defs = {
      {"fig1a", {}, "run.command = bands\nmodel.example = 2, 0.4, 1, 0.6\nbands.samples = 401\n"},
      {"fig1b", {}, "run.command = obc\nmodel.example = 2, 0.4, 1, 0.6\nobc.N = 40\n"},
      {"fig1c", {}, "run.command = gbz\nmodel.example = 2, 0.4, 1, 0.6\n"},
      {"fig1", {"fig1a", "fig1b", "fig1c"}, ""},
      {"fig2a", {}, "run.command = ws\nmodel.example = 2, 0.4, 1, 0.2\n"
                    "ws.F_min_over_E0 = 0.05\nws.F_max_over_E0 = 4\nws.count = 400\n"},
      {"fig2b", {}, "run.command = ws\nmodel.example = 2, 0.4, 1, 0.6\n"
                    "ws.F_min_over_E0 = 0.05\nws.F_max_over_E0 = 4\nws.count = 400\n"},
      {"fig2c", {}, "run.command = ws\nmodel.example = 2, 0.4, 1, 1\n"
                    "ws.F_min_over_E0 = 0.01\nws.F_max_over_E0 = 4\nws.count = 400\n"},
      {"fig2", {"fig2a", "fig2b", "fig2c"}, ""},
      {"fig3a", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 1\nevolve.F_over_E0 = -1\n"
                    "evolve.horizon_tB = 4\nevolve.snapshot_every = 16\n"},
      {"fig3b", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 1\nevolve.F_over_E0 = 1\n"
                    "evolve.horizon_tB = 4\nevolve.snapshot_every = 16\n"},
      {"fig3", {"fig3a", "fig3b"}, ""},
      {"fig5a", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 1\nevolve.F_over_E0 = -0.7\n"
                    "evolve.horizon_tB = 8\nevolve.snapshot_every = 16\n"},
      {"fig5b", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 1\nevolve.F_over_E0 = 0.7\n"
                    "evolve.horizon_tB = 8\nevolve.snapshot_every = 16\n"},
      {"fig5", {"fig5a", "fig5b"}, ""},
      {"fig6a", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 0.92\nevolve.F_over_E0 = -1\n"
                    "evolve.horizon_tB = 50\nevolve.samples_per_tB = 16\nevolve.snapshot_every = 16\n"},
      {"fig6b", {}, "run.command = evolve\nmodel.example = 2, 0.4, 1, 0.92\nevolve.F_over_E0 = 1\n"
                    "evolve.horizon_tB = 50\nevolve.samples_per_tB = 16\nevolve.snapshot_every = 16\n"},
      {"fig6", {"fig6a", "fig6b"}, ""},
  };
  return defs;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& d : presets()) out.emplace_back(d.name);
  return out;
}

std::vector<RunConfig> preset(std::string_view name) {
  for (const auto& d : presets()) {
    if (d.name != name) continue;
    if (d.parts.empty()) {
      RunConfig c = parse_config(d.text);
      c.name = std::string(name);
      return {c};
    }
    std::vector<RunConfig> out;
    for (const auto p : d.parts) {
      auto sub = preset(p);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset `" + std::string(name) + "` (known: " + known + ")");
}

}  // namespace nonbloch
