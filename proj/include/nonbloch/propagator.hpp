#pragma once

#include <vector>

#include "nonbloch/model.hpp"

namespace nonbloch {

// exp(M) for a traceless 2x2 matrix: cosh(mu) I + sinh(mu)/mu M, mu^2 = -det M.
Mat2 expm_traceless(const Mat2& M);

// Transport matrix W of i F dpsi/dk = H(k) psi, psi(k_end) = W psi(k_start).
// Sixth-order Magnus steps (three Gauss points per step), each exponentiated
// exactly, so det W = 1 up to rounding. k_end < k_start is allowed.
//
// A nonzero `kappa` integrates along the shifted contour k + i kappa, i.e.
// beta = exp(kappa) exp(-ik). Over a full period the result is similar to the
// kappa = 0 transport, so its trace is unchanged.
//
// Throws Error{ZeroForce} for F == 0 and Error{BadSize} for steps < 1.
Mat2 transport(const LatticeModel& model, double F, double k_start, double k_end, int steps,
               double kappa = 0.0);

// Same kernel, returning W at every grid point k_start + j h, j = 0..steps.
std::vector<Mat2> transport_path(const LatticeModel& model, double F, double k_start, double k_end,
                                 int steps, double kappa = 0.0);

}  // namespace nonbloch
