#pragma once

// Run configuration: line-oriented `section.key = value` text.
//
//   run.command = ws            # bands | gbz | obc | ws | evolve | sweep
//   run.name    = fig2c         # output file stem
//   model.example = 2, 0.4, 1, 1
//   ws.F_min_over_E0 = 0.01
//   ws.F_max_over_E0 = 4
//   ws.count = 400
//
// Model keys follow model_io.hpp with a `model.` prefix. Forces are given in
// units of Re E0 of the configured model. Unknown keys are rejected.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonbloch/dynamics.hpp"
#include "nonbloch/gbz.hpp"
#include "nonbloch/model.hpp"

namespace nonbloch {

struct ForceAxis {
  std::vector<double> values;  // explicit list wins over the range
  double min = 0.05;
  double max = 4.0;
  int count = 400;

  std::vector<double> expand() const;  // linspace(min, max, count) when values is empty
};

struct BandsSection {
  int samples = 401;
};

struct ObcSection {
  int N = 40;
};

struct WsSection {
  ForceAxis F_over_E0;
  int steps = 4096;
};

struct EvolveSection {
  double F_over_E0 = 1.0;
  int N = 120;
  double w = 4.0;
  double k0 = 0.0;
  Sublattice sublattice = Sublattice::B;
  double horizon_tB = 4.0;
  double dt = 0.0;               // <= 0: stability bound
  int samples_per_tB = 64;
  int snapshot_every = 0;        // in samples; 0 disables the snapshot CSV
  bool error_estimate = false;
  bool two_level = false;        // also integrate the two-level reduction
};

struct SweepSection {
  std::string axis = "F";        // F (force list at fixed model) or delta (example model family)
  ForceAxis values;              // F/E0 values or delta values, depending on axis
  double F_over_E0 = 1.0;        // fixed force for the delta axis
  int steps = 4096;
};

struct RunConfig {
  std::string command;
  std::string name;
  std::optional<LatticeModel> model;
  std::optional<std::array<double, 4>> example;  // Delta, t0, t, delta, when the model came from `example`
  GridSpec gbz;
  BandsSection bands;
  ObcSection obc;
  WsSection ws;
  EvolveSection evolve;
  SweepSection sweep;
};

bool valid_command(std::string_view cmd);

// Parses a config; later duplicates of a key override earlier ones.
// Throws ConfigError naming the offending key or line.
RunConfig parse_config(std::string_view text);

// Fully explicit text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& c);

std::vector<std::string> preset_names();
// A preset may expand to several runs (e.g. both force signs of a figure).
// Throws ConfigError for an unknown name.
std::vector<RunConfig> preset(std::string_view name);

}  // namespace nonbloch
