#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nonbloch/model.hpp"

namespace nonbloch {

constexpr int kDefaultMonodromySteps = 4096;

// Ordered exponential of i F dpsi/dk = H(k) psi from k = -pi to k = +pi.
// Throws Error{ZeroForce}.
Mat2 monodromy(const LatticeModel& model, double F, int steps = kDefaultMonodromySteps);

struct WsResult {
  double F = 0.0;
  Mat2 U = Mat2::Identity();
  cplx cos_theta;
  cplx theta;                     // principal arccos, Re theta in [0, pi]
  std::array<Vec2, 2> eigvec;     // [0]: branch +, eigenvalue exp(-i theta); [1]: branch -
  double Theta_overlap = 0.0;     // |<u1|u2>| / (|u1||u2|); 1 when U is defective
  bool defective = false;
  double t_B = 0.0;               // 2 pi / |F|
  double t_WS = 0.0;              // (pi / Re theta) t_B, +inf when Re theta = 0
  // Imaginary shift of the k contour on which cos_theta was evaluated (see
  // trace_contour_shift); U, eigvec and Theta_overlap always use the real contour.
  double kappa = 0.0;

  // l F + s F theta / (2 pi), s = +1 or -1.
  cplx ladder(int l, int s) const;
};

// Fills every WsResult field from a monodromy (or one-period Floquet) matrix.
// `trace`, when given, replaces Tr U for cos_theta.
WsResult analyse_monodromy(const Mat2& U, double F, std::optional<cplx> trace = std::nullopt);

// For strongly non-normal transport the intermediate products grow large and
// the trace of U cancels catastrophically. Tr U is the same along every
// contour k + i kappa, so this returns the kappa in [-20, 20] that minimises
// the largest intermediate |W(k)|_F, or 0 when that stays below 1e3 on the
// real contour.
double trace_contour_shift(const LatticeModel& model, double F, const Mat2& U_real,
                           int steps = kDefaultMonodromySteps);

// Throws Error{ZeroForce}.
WsResult ws_solve(const LatticeModel& model, double F, int steps = kDefaultMonodromySteps);

// Overlap above which U (or a Floquet operator) counts as defective.
constexpr double kDefectiveOverlap = 1.0 - 1e-9;

struct WkbAngle {
  cplx closed_form;  // (2 pi / F) sqrt(sum_l rho_l rho_-l + phi_l theta_-l)
  cplx quadrature;   // (1/F) integral of E_+(k) over the Brillouin zone, continuous branch
};

// Throws Error{ZeroForce}.
cplx wkb_angle(const LatticeModel& model, double F);
WkbAngle wkb_angle_both(const LatticeModel& model, double F, int samples = 4096);

// {+2E0/n, -2E0/n : n = 1..n_max}, ordered n = 1 first with + before -.
// Logs a warning to stderr when E0 is not real and positive.
std::vector<double> resonance_forces(const LatticeModel& model, int n_max);

struct WsEigenstate {
  int l = 0;
  int branch = 1;
  int n_first = 0;             // cell index of a[0], b[0]
  std::vector<cplx> a, b;
  cplx energy;                 // ladder(l, branch) for the potential -F n
};

// Eigenstate of the driven infinite lattice
//   E a_n = sum rho_l a_{n-l} + sum theta_l b_{n-l} - F n a_n  (same for b)
// sampled on cells [n_first, n_last]; unit norm over that window.
// Throws Error{AtExceptionalPoint} when U is defective.
WsEigenstate ws_eigenstate(const LatticeModel& model, double F, int l, int branch, int n_first,
                           int n_last, int steps = kDefaultMonodromySteps);

}  // namespace nonbloch
