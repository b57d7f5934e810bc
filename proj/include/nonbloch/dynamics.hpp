#pragma once

#include <array>
#include <vector>

#include "nonbloch/model.hpp"
#include "nonbloch/wannier_stark.hpp"

namespace nonbloch {

enum class Sublattice { A, B };

// Amplitudes on cells n = 1..N; a[i], b[i] belong to cell i + 1.
struct WavepacketState {
  int N = 0;
  std::vector<cplx> a, b;
  double t = 0.0;
};

struct Observables {
  double t = 0.0;
  double P = 0.0;               // sum |a_n|^2 + |b_n|^2
  double P_A = 0.0;             // sum |a_n|^2 / P
  double P_B = 0.0;
  double edge_occupancy = 0.0;  // weight on the outer edge cells, relative to P
};

Observables observe(const WavepacketState& s, int edge_cells = 5);

// Packet exp(-((n - N/2)/w)^2) exp(i k0 n) on one sublattice, unit norm.
// Throws Error{BadSize} for N < 10 w.
WavepacketState gaussian_initial(int N, double w, double k0, Sublattice sub);

struct Snapshot {
  double t = 0.0;
  std::vector<double> abs_a_sq, abs_b_sq;
};

struct EvolveOptions {
  double dt = 0.0;               // <= 0 picks the stability bound
  double sample_interval = 0.0;  // <= 0 picks t_B / 64 (or t_max / 256 at F = 0)
  int snapshot_every = 0;        // keep a snapshot every this many samples; 0 = none
  bool estimate_error = false;   // rerun at dt/2 and compare observables
  int edge_cells = 5;
  double edge_tol = 1e-6;
  double blowup = 1e12;
};

struct EvolveResult {
  std::vector<Observables> series;  // first entry is t = 0
  std::vector<Snapshot> snapshots;
  WavepacketState final_state;
  double dt = 0.0;
  // Largest relative change of P, P_A, P_B under dt -> dt/2; negative when not requested.
  double error_estimate = -1.0;
};

// Largest admissible RK4 step, 0.05 / max(|F| N/2, energy scale).
double max_stable_dt(const LatticeModel& model, double F, int N);

// Fixed-step RK4 for
//   i da_n/dt = sum rho_l a_{n-l} + sum theta_l b_{n-l} - F (n - n_c) a_n
//   i db_n/dt = sum phi_l a_{n-l} - sum rho_l b_{n-l} - F (n - n_c) b_n
// with hard walls and n_c = N/2. Throws Error{BadInput} when dt exceeds the
// stability bound, Error{Instability} when P exceeds opts.blowup, and
// Error{EdgeContamination} when the edge occupancy exceeds opts.edge_tol.
EvolveResult evolve_lattice(const LatticeModel& model, double F, const WavepacketState& state, double t_max,
                            const EvolveOptions& opts = {});

struct TwoLevelState {
  cplx f_A{0.0, 0.0};
  cplx f_B{1.0, 0.0};
  double t = 0.0;
  double k0 = 0.0;
};

struct TwoLevelSample {
  double t = 0.0;
  double abs_fA_sq = 0.0;
  double abs_fB_sq = 0.0;
  double norm = 0.0;  // |f_A|^2 + |f_B|^2
};

struct TwoLevelOptions {
  double dt = 0.0;               // <= 0: min(0.01, 0.05 / energy scale, t_B / 400)
  double sample_interval = 0.0;  // <= 0: every step
};

// RK4 for i df/dt = H(k0 + F t) f. Throws Error{ZeroForce}.
std::vector<TwoLevelSample> evolve_two_level(const LatticeModel& model, double F, double k0,
                                             const TwoLevelState& init, double t_max,
                                             const TwoLevelOptions& opts = {});

struct FloquetResult {
  std::array<cplx, 2> exponents;  // +F theta / 2pi, -F theta / 2pi
  Mat2 U_period;                  // propagator over one Bloch period
  double overlap = 0.0;
  bool defective = false;
};

// Throws Error{ZeroForce}.
FloquetResult floquet_exponents(const LatticeModel& model, double F, int steps = kDefaultMonodromySteps);

// Rotating-wave reduction around F = +2 rho_0 (couplings theta_1, phi_-1,
// detuning F - 2 rho_0) or F = -2 rho_0 (theta_-1, phi_1, detuning F + 2 rho_0):
//   i dg_A/dt = c_A exp(-+ i Omega t) g_B,  i dg_B/dt = c_B exp(+- i Omega t) g_A.
// Samples report |g_A|^2, |g_B|^2. Warns on stderr outside rho_0 >> hopping.
struct RwaOptions {
  double dt = 1e-3;
  double sample_interval = 0.0;  // <= 0: every step
};
std::vector<TwoLevelSample> rwa_two_level(const LatticeModel& model, double F, const TwoLevelState& init,
                                          double t_max, const RwaOptions& opts = {});

// Detuning used by rwa_two_level for this force.
double rwa_detuning(const LatticeModel& model, double F);

}  // namespace nonbloch
