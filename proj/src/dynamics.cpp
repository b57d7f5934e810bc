#include "nonbloch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "nonbloch/error.hpp"
#include "nonbloch/propagator.hpp"

namespace nonbloch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Number of sub-steps of size <= dt_max that tile one sample interval.
int substeps(double interval, double dt_max) {
  return std::max(1, static_cast<int>(std::ceil(interval / dt_max - 1e-9)));
}

int sample_count(double t_max, double interval) {
  return std::max(0, static_cast<int>(std::ceil(t_max / interval - 1e-9)));
}

// Right-hand side of the driven lattice on the interleaved vector y.
struct LatticeRhs {
  const LatticeModel& model;
  double F;
  int N;

  void operator()(const std::vector<cplx>& y, std::vector<cplx>& out) const {
    const int q = model.range();
    const double nc = 0.5 * N;
    for (int c = 0; c < N; ++c) {
      cplx sa{}, sb{};
      for (int l = -q; l <= q; ++l) {
        const int m = c - l;
        if (m < 0 || m >= N) continue;
        const cplx am = y[2 * m], bm = y[2 * m + 1];
        sa += model.rho(l) * am + model.theta(l) * bm;
        sb += model.phi(l) * am - model.rho(l) * bm;
      }
      const double pot = -F * (c + 1 - nc);
      out[2 * c] = -kI * (sa + pot * y[2 * c]);
      out[2 * c + 1] = -kI * (sb + pot * y[2 * c + 1]);
    }
  }
};

template <class Rhs>
void rk4_step(const Rhs& f, std::vector<cplx>& y, double dt, std::array<std::vector<cplx>, 5>& w) {
  auto& [k1, k2, k3, k4, tmp] = w;
  const std::size_t n = y.size();
  f(y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  f(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  f(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  f(tmp, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

WavepacketState unpack(const std::vector<cplx>& y, int N, double t) {
  WavepacketState s{N, std::vector<cplx>(static_cast<std::size_t>(N)), std::vector<cplx>(static_cast<std::size_t>(N)), t};
  for (int c = 0; c < N; ++c) {
    s.a[c] = y[2 * c];
    s.b[c] = y[2 * c + 1];
  }
  return s;
}

struct Run {
  std::vector<Observables> series;
  std::vector<Snapshot> snapshots;
  WavepacketState final_state;
};

Run run_lattice(const LatticeModel& model, double F, const WavepacketState& init, int n_samples,
                double interval, int n_sub, const EvolveOptions& opts, bool check) {
  const int N = init.N;
  std::vector<cplx> y(2 * static_cast<std::size_t>(N));
  for (int c = 0; c < N; ++c) {
    y[2 * c] = init.a[c];
    y[2 * c + 1] = init.b[c];
  }
  std::array<std::vector<cplx>, 5> work;
  for (auto& v : work) v.resize(y.size());
  const LatticeRhs rhs{model, F, N};
  const double dt = interval / n_sub;

  Run r;
  auto record = [&](int sample) {
    const double t = init.t + sample * interval;
    WavepacketState s = unpack(y, N, t);
    const Observables o = observe(s, opts.edge_cells);
    if (check) {
      if (!std::isfinite(o.P) || o.P > opts.blowup)
        throw Error(ErrorKind::Instability,
                    "norm reached " + std::to_string(o.P) + " at t = " + std::to_string(t));
      if (o.edge_occupancy > opts.edge_tol)
        throw Error(ErrorKind::EdgeContamination, "edge occupancy " + std::to_string(o.edge_occupancy) +
                                                      " at t = " + std::to_string(t) + "; enlarge N");
    }
    r.series.push_back(o);
    if (opts.snapshot_every > 0 && sample % opts.snapshot_every == 0) {
      Snapshot snap;
      snap.t = t;
      for (int c = 0; c < N; ++c) {
        snap.abs_a_sq.push_back(std::norm(s.a[c]));
        snap.abs_b_sq.push_back(std::norm(s.b[c]));
      }
      r.snapshots.push_back(std::move(snap));
    }
    if (sample == n_samples) r.final_state = std::move(s);
  };

  record(0);
  for (int s = 1; s <= n_samples; ++s) {
    for (int j = 0; j < n_sub; ++j) rk4_step(rhs, y, dt, work);
    record(s);
  }
  return r;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

}  // namespace

Observables observe(const WavepacketState& s, int edge_cells) {
  Observables o;
  o.t = s.t;
  double pa = 0.0, pb = 0.0, edge = 0.0;
  for (int c = 0; c < s.N; ++c) {
    const double wa = std::norm(s.a[c]), wb = std::norm(s.b[c]);
    pa += wa;
    pb += wb;
    if (c < edge_cells || c >= s.N - edge_cells) edge += wa + wb;
  }
  o.P = pa + pb;
  if (o.P > 0.0) {
    o.P_A = pa / o.P;
    o.P_B = pb / o.P;
    o.edge_occupancy = edge / o.P;
  }
  return o;
}

WavepacketState gaussian_initial(int N, double w, double k0, Sublattice sub) {
  if (!(w > 0.0)) throw Error(ErrorKind::BadSize, "packet width must be positive");
  if (N < 10.0 * w) throw Error(ErrorKind::BadSize, "lattice of " + std::to_string(N) +
                                                        " cells is shorter than 10 packet widths");
  WavepacketState s{N, std::vector<cplx>(static_cast<std::size_t>(N)), std::vector<cplx>(static_cast<std::size_t>(N)), 0.0};
  auto& target = sub == Sublattice::A ? s.a : s.b;
  const double nc = 0.5 * N;
  double norm = 0.0;
  for (int c = 0; c < N; ++c) {
    const double n = c + 1;
    const double x = (n - nc) / w;
    target[c] = std::exp(-x * x) * std::polar(1.0, k0 * n);
    norm += std::norm(target[c]);
  }
  norm = std::sqrt(norm);
  for (auto& v : target) v /= norm;
  return s;
}

double max_stable_dt(const LatticeModel& model, double F, int N) {
  return 0.05 / std::max({std::abs(F) * 0.5 * N, bloch_energy_scale(model), 1e-300});
}

EvolveResult evolve_lattice(const LatticeModel& model, double F, const WavepacketState& state, double t_max,
                            const EvolveOptions& opts) {
  const int N = state.N;
  if (N < model.range() + 1 || static_cast<int>(state.a.size()) != N || static_cast<int>(state.b.size()) != N)
    throw Error(ErrorKind::BadSize, "state does not match a lattice of N >= q + 1 cells");
  if (!(t_max >= 0.0)) throw Error(ErrorKind::BadInput, "t_max must be non-negative");
  const double guard = max_stable_dt(model, F, N);
  if (opts.dt > guard * (1.0 + 1e-12))
    throw Error(ErrorKind::BadInput, "dt = " + std::to_string(opts.dt) + " exceeds the stability bound " +
                                         std::to_string(guard));
  const double dt_max = opts.dt > 0.0 ? opts.dt : guard;
  double interval = opts.sample_interval;
  if (interval <= 0.0) interval = F != 0.0 ? 2.0 * kPi / std::abs(F) / 64.0 : std::max(t_max, 1e-12) / 256.0;
  const int n_samples = sample_count(t_max, interval);
  const int n_sub = substeps(interval, dt_max);

  Run main = run_lattice(model, F, state, n_samples, interval, n_sub, opts, true);
  EvolveResult res;
  res.dt = interval / n_sub;
  if (opts.estimate_error) {
    EvolveOptions quiet = opts;
    quiet.snapshot_every = 0;
    const Run fine = run_lattice(model, F, state, n_samples, interval, 2 * n_sub, quiet, false);
    double err = 0.0;
    for (std::size_t i = 0; i < main.series.size(); ++i) {
      const auto& x = main.series[i];
      const auto& y = fine.series[i];
      err = std::max({err, std::abs(x.P - y.P) / std::max(std::abs(y.P), 1e-300),
                      std::abs(x.P_A - y.P_A) / std::max(std::abs(y.P_A), 1e-12),
                      std::abs(x.P_B - y.P_B) / std::max(std::abs(y.P_B), 1e-12)});
    }
    res.error_estimate = err;
  }
  res.series = std::move(main.series);
  res.snapshots = std::move(main.snapshots);
  res.final_state = std::move(main.final_state);
  return res;
}

std::vector<TwoLevelSample> evolve_two_level(const LatticeModel& model, double F, double k0,
                                             const TwoLevelState& init, double t_max,
                                             const TwoLevelOptions& opts) {
  if (F == 0.0) throw Error(ErrorKind::ZeroForce, "force must be nonzero");
  const double t_B = 2.0 * kPi / std::abs(F);
  double dt_max = opts.dt > 0.0 ? opts.dt
                                : std::min({0.01, 0.05 / std::max(bloch_energy_scale(model), 1e-300), t_B / 400.0});
  const double interval = opts.sample_interval > 0.0 ? opts.sample_interval : dt_max;
  const int n_samples = sample_count(t_max, interval);
  const int n_sub = substeps(interval, dt_max);
  const double dt = interval / n_sub;

  auto H = [&](double t) { return bloch_matrix(model, std::polar(1.0, -(k0 + F * t))); };
  Vec2 f(init.f_A, init.f_B);
  std::vector<TwoLevelSample> out;
  out.reserve(static_cast<std::size_t>(n_samples) + 1);
  auto record = [&](double t) {
    out.push_back({t, std::norm(f(0)), std::norm(f(1)), f.squaredNorm()});
  };
  double t = init.t;
  record(t);
  for (int s = 1; s <= n_samples; ++s) {
    for (int j = 0; j < n_sub; ++j) {
      const Mat2 H0 = H(t), Hm = H(t + 0.5 * dt), H1 = H(t + dt);
      const Vec2 k1 = -kI * (H0 * f);
      const Vec2 k2 = -kI * (Hm * (f + 0.5 * dt * k1));
      const Vec2 k3 = -kI * (Hm * (f + 0.5 * dt * k2));
      const Vec2 k4 = -kI * (H1 * (f + dt * k3));
      f += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    t = init.t + s * interval;
    record(t);
  }
  return out;
}

FloquetResult floquet_exponents(const LatticeModel& model, double F, int steps) {
  if (F == 0.0) throw Error(ErrorKind::ZeroForce, "force must be nonzero");
  FloquetResult r;
  r.U_period = transport(model, F, 0.0, F > 0.0 ? 2.0 * kPi : -2.0 * kPi, steps);
  const Mat2 U = monodromy(model, F, steps);
  const double kappa = trace_contour_shift(model, F, U, steps);
  const WsResult ws = analyse_monodromy(
      r.U_period, F, kappa == 0.0 ? std::nullopt : std::optional<cplx>(transport(model, F, -kPi, kPi, steps, kappa).trace()));
  const cplx e = F * ws.theta / (2.0 * kPi);
  r.exponents = {e, -e};
  r.overlap = ws.Theta_overlap;
  r.defective = ws.defective;
  return r;
}

double rwa_detuning(const LatticeModel& model, double F) {
  const double d = model.rho(0).real();
  return F >= 0.0 ? F - 2.0 * d : F + 2.0 * d;
}

std::vector<TwoLevelSample> rwa_two_level(const LatticeModel& model, double F, const TwoLevelState& init,
                                          double t_max, const RwaOptions& opts) {
  const double delta_big = std::abs(model.rho(0));
  double hop = 0.0;
  for (int l = -model.range(); l <= model.range(); ++l) {
    hop = std::max({hop, std::abs(model.theta(l)), std::abs(model.phi(l))});
    if (l != 0) hop = std::max(hop, std::abs(model.rho(l)));
  }
  if (model.range() != 1) warn("rotating-wave reduction keeps only nearest-neighbour couplings");
  if (delta_big < 5.0 * hop) warn("rotating-wave reduction assumes rho_0 >> hopping amplitudes");
  const double omega = rwa_detuning(model, F);
  if (std::abs(omega) > 0.5 * delta_big) warn("force is far from the 2 rho_0 resonance");

  const bool plus = F >= 0.0;
  const cplx cA = plus ? model.theta(1) : model.theta(-1);
  const cplx cB = plus ? model.phi(-1) : model.phi(1);
  const double sgn = plus ? -1.0 : 1.0;  // g_A picks up exp(sgn i Omega t)
  auto rhs = [&](double t, const Vec2& g) {
    const cplx ph = std::polar(1.0, sgn * omega * t);
    return Vec2(-kI * cA * ph * g(1), -kI * cB * std::conj(ph) * g(0));
  };

  const double dt_max = opts.dt > 0.0 ? opts.dt : 1e-3;
  const double interval = opts.sample_interval > 0.0 ? opts.sample_interval : dt_max;
  const int n_samples = sample_count(t_max, interval);
  const int n_sub = substeps(interval, dt_max);
  const double dt = interval / n_sub;
  Vec2 g(init.f_A, init.f_B);
  std::vector<TwoLevelSample> out;
  out.push_back({init.t, std::norm(g(0)), std::norm(g(1)), g.squaredNorm()});
  double t = init.t;
  for (int s = 1; s <= n_samples; ++s) {
    for (int j = 0; j < n_sub; ++j) {
      const Vec2 k1 = rhs(t, g);
      const Vec2 k2 = rhs(t + 0.5 * dt, g + 0.5 * dt * k1);
      const Vec2 k3 = rhs(t + 0.5 * dt, g + 0.5 * dt * k2);
      const Vec2 k4 = rhs(t + dt, g + dt * k3);
      g += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    t = init.t + s * interval;
    out.push_back({t, std::norm(g(0)), std::norm(g(1)), g.squaredNorm()});
  }
  return out;
}

}  // namespace nonbloch
