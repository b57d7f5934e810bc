#pragma once

#include <functional>
#include <vector>

#include "nonbloch/model.hpp"
#include "nonbloch/polyroots.hpp"

namespace nonbloch {

// Rectangular scan window in the complex energy plane.
struct GridSpec {
  cplx center{};
  double half_width = 0.0;     // real half-width; <= 0 selects 1.5 * Bloch energy scale
  double half_height = 0.0;    // imaginary half-width; <= 0 reuses half_width
  int n_re = 400;
  int n_im = 400;
  // Column/row minima above this residual are never refined. A purely real
  // non-Bloch segment falls between grid rows, where off-axis residuals near
  // the band edges approach 1, so the default refines every minimum.
  double coarse_tol = 1.0;
  double residual_tol = 1e-8;
  double collapse_tol = 1e-6;  // relative to the Bloch energy scale
};

struct GbzPoint {
  cplx E;
  cplx beta;        // one of the two middle-modulus roots at E
  double residual;  // gbz_residual at E
};

struct GbzCurve {
  std::vector<GbzPoint> points;
  double residual_tol = 0.0;
  double energy_scale = 0.0;
  // Largest pairwise |E_i - E_j| within one chiral branch (Re E > 0, or
  // Re E = 0 and Im E >= 0); the E -> -E images are not compared.
  double diameter = 0.0;
  bool collapsed = false;
};

// (|beta_{2q+1}| - |beta_{2q}|) / |beta_{2q+1}|, zero on the generalized
// Brillouin zone. Returns 1 when beta_{2q+1} is at infinity and beta_{2q} is not.
double gbz_residual(const LatticeModel& model, cplx E);
double gbz_residual(const RootSet& roots, int q);

// Throws Error{EmptyCurve} when no energy in the window satisfies the
// condition to residual_tol.
GbzCurve trace_gbz(const LatticeModel& model, const GridSpec& grid = {});

struct ScalingSample {
  double eps = 0.0;
  double size = 0.0;  // max |beta| (or max |1/beta| for a GBZ outside the unit circle)
  std::size_t points = 0;
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;  // rms deviation of log(size) from the fit
  std::vector<ScalingSample> samples;
};

using ModelFamily = std::function<LatticeModel(double)>;

// Log-log fit of the generalized-Brillouin-zone size against eps. Each member
// is scanned in a window around its collapse energy that is zoomed until the
// non-Bloch band is resolved.
ScalingFit collapse_scaling(const ModelFamily& family, const std::vector<double>& eps_list);

}  // namespace nonbloch
