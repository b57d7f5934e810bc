#include "nonbloch/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "nonbloch/csv.hpp"
#include "nonbloch/error.hpp"
#include "nonbloch/model_io.hpp"
#include "nonbloch/obc.hpp"
#include "nonbloch/parallel.hpp"
#include "nonbloch/svg.hpp"
#include "nonbloch/wannier_stark.hpp"

namespace nonbloch {

namespace {

constexpr double kPi = std::numbers::pi;

struct Writer {
  const RunConfig& cfg;
  const OutputOptions& out;
  std::vector<std::string> written;

  std::string path(const std::string& suffix) const {
    return (std::filesystem::path(out.out_dir) / (cfg.name + suffix)).string();
  }
  std::ofstream open(const std::string& suffix) {
    const std::string p = path(suffix);
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write `" + p + "`");
    written.push_back(p);
    return f;
  }
  void svg(const std::string& suffix, const SvgPlot& plot) {
    if (!out.svg) return;
    open(suffix) << plot.render();
  }
};

const LatticeModel& need_model(const RunConfig& c) {
  if (!c.model) throw ConfigError("no model given (use model.* keys, --model or a preset)");
  return *c.model;
}

double force_unit(const LatticeModel& m) {
  const double e0 = collapse_energy(m).real();
  if (!(e0 > 0.0)) throw Error(ErrorKind::BadInput, "forces are given in units of Re E0, which is not positive");
  return e0;
}

void run_bands(Writer& w) {
  const auto& m = need_model(w.cfg);
  const int n = w.cfg.bands.samples;
  auto f = w.open(".csv");
  CsvWriter csv(f, {"k", "Re(E_plus)", "Im(E_plus)", "Re(E_minus)", "Im(E_minus)"});
  SvgSeries up{"Re E+", {}, {}}, dn{"Re E-", {}, {}}, im{"Im E+", {}, {}};
  for (int i = 0; i < n; ++i) {
    const double k = -kPi + 2.0 * kPi * i / n;
    const BlochSample s = bloch_hamiltonian(m, k);
    csv.row({s.k, s.e_plus.real(), s.e_plus.imag(), s.e_minus.real(), s.e_minus.imag()});
    up.x.push_back(k), up.y.push_back(s.e_plus.real());
    dn.x.push_back(k), dn.y.push_back(s.e_minus.real());
    im.x.push_back(k), im.y.push_back(s.e_plus.imag());
  }
  w.svg(".svg", {"Bloch bands", "k", "E", {up, dn, im}});
}

void run_gbz(Writer& w) {
  const auto& m = need_model(w.cfg);
  const GbzCurve curve = trace_gbz(m, w.cfg.gbz);
  auto f = w.open(".csv");
  CsvWriter csv(f, {"Re(E)", "Im(E)", "Re(beta)", "Im(beta)", "abs_beta", "residual"});
  SvgSeries e{"non-Bloch bands", {}, {}, true};
  for (const auto& p : curve.points) {
    csv.row({p.E.real(), p.E.imag(), p.beta.real(), p.beta.imag(), std::abs(p.beta), p.residual});
    e.x.push_back(p.E.real()), e.y.push_back(p.E.imag());
  }
  std::cout << "gbz: " << curve.points.size() << " points, diameter " << curve.diameter
            << (curve.collapsed ? " (collapsed)" : "") << '\n';
  w.svg(".svg", {"non-Bloch spectrum", "Re E", "Im E", {e}});
}

void run_obc(Writer& w) {
  const auto& m = need_model(w.cfg);
  const int N = w.cfg.obc.N;
  const SpectrumResult sp = obc_spectrum(build_obc_matrix(m, N));
  auto f = w.open(".csv");
  CsvWriter csv(f, {"index", "Re(E)", "Im(E)", "center_of_mass", "participation_ratio"});
  SvgSeries e{"OBC eigenvalues", {}, {}, true};
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    const SkinMetrics sm = skin_metrics(sp.eigenvectors.col(static_cast<Eigen::Index>(i)), N);
    const cplx E = sp.eigenvalues[i];
    csv.row({static_cast<double>(i), E.real(), E.imag(), sm.center_of_mass, sm.participation_ratio});
    e.x.push_back(E.real()), e.y.push_back(E.imag());
  }
  w.svg(".svg", {"open-chain spectrum, N = " + std::to_string(N), "Re E", "Im E", {e}});
}

struct WsRow {
  double delta = std::nan("");
  double f = 0.0;
  WsResult ws;
  cplx wkb;
};

std::vector<WsRow> ws_rows(const std::vector<std::pair<LatticeModel, double>>& jobs_in, const std::vector<double>& deltas,
                           const std::vector<double>& fs, int steps, unsigned jobs) {
  std::vector<WsRow> rows(jobs_in.size());
  parallel_for(jobs_in.size(), jobs, [&](std::size_t i) {
    const auto& [model, F] = jobs_in[i];
    rows[i].delta = deltas[i];
    rows[i].f = fs[i];
    rows[i].ws = ws_solve(model, F, steps);
    rows[i].wkb = wkb_angle(model, F);
  });
  return rows;
}

void run_ws(Writer& w) {
  const auto& m = need_model(w.cfg);
  const double e0 = force_unit(m);
  std::vector<std::pair<LatticeModel, double>> jobs;
  std::vector<double> deltas, fs;
  for (const double f : w.cfg.ws.F_over_E0.expand()) {
    jobs.emplace_back(m, f * e0);
    deltas.push_back(std::nan(""));
    fs.push_back(f);
  }
  const auto rows = ws_rows(jobs, deltas, fs, w.cfg.ws.steps, w.out.jobs);
  auto file = w.open(".csv");
  CsvWriter csv(file, {"F_over_E0", "Re(cos_theta)", "Im(cos_theta)", "Theta_overlap", "Re(theta_wkb_cos)"});
  SvgSeries c{"Re cos theta", {}, {}}, k{"WKB", {}, {}}, o{"Theta", {}, {}};
  for (const auto& r : rows) {
    const double wkb = std::cos(r.wkb).real();
    csv.row({r.f, r.ws.cos_theta.real(), r.ws.cos_theta.imag(), r.ws.Theta_overlap, wkb});
    c.x.push_back(r.f), c.y.push_back(r.ws.cos_theta.real());
    k.x.push_back(r.f), k.y.push_back(wkb);
    o.x.push_back(r.f), o.y.push_back(r.ws.Theta_overlap);
  }
  w.svg(".svg", {"Wannier-Stark angle", "F / E0", "cos theta", {c, k}});
  w.svg("_overlap.svg", {"eigenvector overlap of U", "F / E0", "Theta", {o}});
}

void run_sweep(Writer& w) {
  const auto& s = w.cfg.sweep;
  std::vector<std::pair<LatticeModel, double>> jobs;
  std::vector<double> deltas, fs;
  if (s.axis == "F") {
    const auto& m = need_model(w.cfg);
    const double e0 = force_unit(m);
    const double d = w.cfg.example ? (*w.cfg.example)[3] : std::nan("");
    for (const double f : s.values.expand()) {
      jobs.emplace_back(m, f * e0);
      deltas.push_back(d);
      fs.push_back(f);
    }
  } else {
    const auto& e = *w.cfg.example;
    for (const double d : s.values.expand()) {
      LatticeModel m = example_model(e[0], e[1], e[2], d);
      jobs.emplace_back(m, s.F_over_E0 * force_unit(m));
      deltas.push_back(d);
      fs.push_back(s.F_over_E0);
    }
  }
  const auto rows = ws_rows(jobs, deltas, fs, s.steps, w.out.jobs);
  auto file = w.open(".csv");
  CsvWriter csv(file, {"delta", "F_over_E0", "Re(cos_theta)", "Im(cos_theta)", "Theta_overlap", "Re(theta_wkb_cos)",
                       "t_WS_over_tB"});
  SvgSeries c{"Re cos theta", {}, {}}, o{"Theta", {}, {}};
  for (const auto& r : rows) {
    csv.row({r.delta, r.f, r.ws.cos_theta.real(), r.ws.cos_theta.imag(), r.ws.Theta_overlap,
             std::cos(r.wkb).real(), r.ws.t_WS / r.ws.t_B});
    const double x = s.axis == "F" ? r.f : r.delta;
    c.x.push_back(x), c.y.push_back(r.ws.cos_theta.real());
    o.x.push_back(x), o.y.push_back(r.ws.Theta_overlap);
  }
  w.svg(".svg", {"sweep", s.axis == "F" ? "F / E0" : "delta", "", {c, o}});
}

void run_evolve(Writer& w) {
  const auto& m = need_model(w.cfg);
  const auto& e = w.cfg.evolve;
  const double F = e.F_over_E0 * force_unit(m);
  if (F == 0.0) throw Error(ErrorKind::ZeroForce, "evolve.F_over_E0 must be nonzero");
  const double t_B = 2.0 * kPi / std::abs(F);
  const WavepacketState init = gaussian_initial(e.N, e.w, e.k0, e.sublattice);
  EvolveOptions opt;
  opt.dt = e.dt;
  opt.sample_interval = t_B / e.samples_per_tB;
  opt.snapshot_every = e.snapshot_every;
  opt.estimate_error = e.error_estimate;
  const EvolveResult res = evolve_lattice(m, F, init, e.horizon_tB * t_B, opt);

  auto file = w.open(".csv");
  CsvWriter csv(file, {"t_over_tB", "P", "P_A", "P_B", "edge_occupancy"});
  SvgSeries pa{"P_A", {}, {}}, pb{"P_B", {}, {}}, pn{"P", {}, {}};
  for (const auto& o : res.series) {
    const double x = o.t / t_B;
    csv.row({x, o.P, o.P_A, o.P_B, o.edge_occupancy});
    pa.x.push_back(x), pa.y.push_back(o.P_A);
    pb.x.push_back(x), pb.y.push_back(o.P_B);
    pn.x.push_back(x), pn.y.push_back(o.P);
  }
  if (!res.snapshots.empty()) {
    auto sf = w.open("_snapshots.csv");
    CsvWriter snap(sf, {"t_over_tB", "n", "abs_a_sq", "abs_b_sq"});
    for (const auto& s : res.snapshots)
      for (std::size_t i = 0; i < s.abs_a_sq.size(); ++i)
        snap.row({s.t / t_B, static_cast<double>(i + 1), s.abs_a_sq[i], s.abs_b_sq[i]});
  }
  if (e.two_level) {
    TwoLevelState s0;
    s0.f_A = e.sublattice == Sublattice::A ? 1.0 : 0.0;
    s0.f_B = e.sublattice == Sublattice::B ? 1.0 : 0.0;
    s0.k0 = e.k0;
    TwoLevelOptions to;
    to.sample_interval = t_B / e.samples_per_tB;
    auto tf = w.open("_two_level.csv");
    CsvWriter tl(tf, {"t_over_tB", "abs_fA_sq", "abs_fB_sq", "norm"});
    for (const auto& s : evolve_two_level(m, F, e.k0, s0, e.horizon_tB * t_B, to))
      tl.row({s.t / t_B, s.abs_fA_sq, s.abs_fB_sq, s.norm});
  }
  if (res.error_estimate >= 0.0) std::cout << "evolve: step-halving change " << res.error_estimate << '\n';
  w.svg(".svg", {"sublattice fractions", "t / t_B", "", {pa, pb}});
  w.svg("_norm.svg", {"norm", "t / t_B", "P", {pn}});
}

int exit_code_for(const Error& e) { return is_configuration_error(e.kind()) ? 2 : 3; }

}  // namespace

std::vector<std::string> execute(const RunConfig& config, const OutputOptions& out) {
  std::filesystem::create_directories(out.out_dir);
  Writer w{config, out, {}};
  const std::string& c = config.command;
  if (c == "bands") run_bands(w);
  else if (c == "gbz") run_gbz(w);
  else if (c == "obc") run_obc(w);
  else if (c == "ws") run_ws(w);
  else if (c == "sweep") run_sweep(w);
  else if (c == "evolve") run_evolve(w);
  else throw ConfigError("no command given");
  return w.written;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Bloch, non-Bloch and Wannier-Stark toolkit for two-band non-Hermitian lattices", "nonbloch"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, model_path, out_dir = ".", preset_name;
  std::vector<std::string> sets;
  bool svg = false, print_config = false;
  unsigned jobs = default_jobs();
  app.add_option("--config", config_path, "run configuration file (section.key = value)");
  app.add_option("--model", model_path, "model file (q, rho[l], theta[l], phi[l], example)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "also write SVG plots");
  app.add_option("--jobs", jobs, "worker threads for scans and sweeps")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "extra `section.key=value` entries, applied last");

  std::string command;
  for (const char* name : {"bands", "gbz", "obc", "ws", "evolve", "sweep"})
    app.add_subcommand(name, std::string("run the ") + name + " computation")->callback([&command, name] { command = name; });
  auto* pre = app.add_subcommand("preset", "run a figure recipe");
  pre->add_option("NAME", preset_name, "preset name")->required();
  pre->add_flag("--print-config", print_config, "print the expanded configuration and exit");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string overrides;
    for (const auto& s : sets) overrides += s + '\n';
    std::vector<RunConfig> configs;
    if (pre->parsed()) {
      for (const auto& base : preset(preset_name)) {
        std::string text = format_config(base);
        if (!model_path.empty())
          throw ConfigError("--model cannot be combined with a preset; use --set model.* instead");
        configs.push_back(parse_config(text + overrides));
      }
      if (print_config) {
        for (const auto& c : configs) std::cout << "# preset " << c.name << '\n' << format_config(c) << '\n';
        return 0;
      }
    } else {
      std::string text;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file `" + config_path + "`");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str() + '\n';
      }
      if (!model_path.empty()) {
        std::ifstream in(model_path);
        if (!in) throw ConfigError("cannot open model file `" + model_path + "`");
        for (const auto& kv : split_key_values(std::string(std::istreambuf_iterator<char>(in), {})))
          text += "model." + kv.key + " = " + kv.value + '\n';
      }
      RunConfig c = parse_config(text + overrides);
      c.command = command;
      if (c.name.empty() || valid_command(c.name)) c.name = command;
      configs.push_back(std::move(c));
    }
    const OutputOptions out{out_dir, svg, jobs};
    for (const auto& c : configs)
      for (const auto& p : execute(c, out)) std::cout << "wrote " << p << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace nonbloch
