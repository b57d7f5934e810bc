#include "nonbloch/gbz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "nonbloch/error.hpp"
#include "nonbloch/parallel.hpp"

namespace nonbloch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool principal_branch(cplx E) { return E.real() > 0.0 || (E.real() == 0.0 && E.imag() >= 0.0); }

// Golden-section minimisation of the residual on the segment a + s (b - a),
// s in [0, 1]. The residual is V-shaped across the curve, which keeps it
// unimodal on a one-cell bracket.
cplx refine(const LatticeModel& model, cplx a, cplx b, double tol_abs) {
  constexpr double g = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  const double len = std::abs(b - a);
  auto f = [&](double s) { return gbz_residual(model, a + s * (b - a)); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while ((hi - lo) * len > tol_abs) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return a + 0.5 * (lo + hi) * (b - a);
}

void add_middle_pair(const LatticeModel& model, cplx E, double residual,
                     std::vector<GbzPoint>& out) {
  const RootSet rs = sorted_roots(model, E);
  const int q = model.range();
  out.push_back({E, rs.root(2 * q - 1), residual});
  out.push_back({E, rs.root(2 * q), residual});
}

void finish(GbzCurve& curve, const GridSpec& grid) {
  auto& pts = curve.points;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) pts.push_back({-pts[i].E, pts[i].beta, pts[i].residual});

  auto key = [](const GbzPoint& p) {
    return std::make_tuple(p.E.real(), p.E.imag(), p.beta.real(), p.beta.imag());
  };
  std::sort(pts.begin(), pts.end(), [&](const GbzPoint& x, const GbzPoint& y) { return key(x) < key(y); });
  const double etol = 1e-12 * curve.energy_scale;
  auto same = [&](const GbzPoint& x, const GbzPoint& y) {
    const bool beta_eq = (std::isinf(x.beta.real()) && std::isinf(y.beta.real())) ||
                         std::abs(x.beta - y.beta) <= 1e-12 * (1.0 + std::abs(x.beta));
    return std::abs(x.E - y.E) <= etol && beta_eq;
  };
  pts.erase(std::unique(pts.begin(), pts.end(), same), pts.end());

  std::vector<cplx> energies;
  for (const auto& p : pts)
    if (principal_branch(p.E) && (energies.empty() || std::abs(energies.back() - p.E) > etol))
      energies.push_back(p.E);
  double diam = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i)
    for (std::size_t j = i + 1; j < energies.size(); ++j)
      diam = std::max(diam, std::abs(energies[i] - energies[j]));
  curve.diameter = diam;
  curve.collapsed = diam < grid.collapse_tol * curve.energy_scale;
}

bool inside(const GridSpec& g, double hw, double hh, cplx E) {
  return std::abs(E.real() - g.center.real()) <= hw && std::abs(E.imag() - g.center.imag()) <= hh;
}

}  // namespace

double gbz_residual(const RootSet& roots, int q) {
  const double lo = roots.modulus(2 * q - 1);
  const double hi = roots.modulus(2 * q);
  if (std::isinf(hi)) return std::isinf(lo) ? 0.0 : 1.0;
  return (hi - lo) / std::max(hi, 1e-300);
}

double gbz_residual(const LatticeModel& model, cplx E) {
  return gbz_residual(sorted_roots(model, E), model.range());
}

GbzCurve trace_gbz(const LatticeModel& model, const GridSpec& grid) {
  if (grid.n_re < 3 || grid.n_im < 3)
    throw Error(ErrorKind::BadSize, "scan grid needs at least 3 x 3 cells");
  GbzCurve curve;
  curve.residual_tol = grid.residual_tol;
  curve.energy_scale = bloch_energy_scale(model);
  const double scale = curve.energy_scale > 0.0 ? curve.energy_scale : 1.0;
  const double hw = grid.half_width > 0.0 ? grid.half_width : 1.5 * scale;
  const double hh = grid.half_height > 0.0 ? grid.half_height : hw;

  // One-sided hopping: the band collapses onto +-E0 with beta at 0 (or infinity).
  if (const Side side = model.one_sided(); side != Side::None) {
    const cplx e0 = collapse_energy(model);
    const cplx beta = side == Side::Right ? cplx{} : cplx{kInf, 0.0};
    for (const cplx E : {e0, -e0})
      if (inside(grid, hw, hh, E)) {
        curve.points.push_back({E, beta, 0.0});
        curve.points.push_back({E, beta, 0.0});
      }
    if (curve.points.empty())
      throw Error(ErrorKind::EmptyCurve, "collapse energies lie outside the scan window");
    finish(curve, grid);
    return curve;
  }

  const int nx = grid.n_re, ny = grid.n_im;
  const double dx = 2.0 * hw / nx, dy = 2.0 * hh / ny;
  auto cell = [&](int i, int j) {
    return grid.center + cplx{-hw + (i + 0.5) * dx, -hh + (j + 0.5) * dy};
  };

  std::vector<double> r(static_cast<std::size_t>(nx) * ny);
  auto at = [&](int i, int j) -> double& { return r[static_cast<std::size_t>(j) * nx + i]; };
  parallel_for(static_cast<std::size_t>(ny), default_jobs(), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < nx; ++i) at(i, j) = gbz_residual(model, cell(i, j));
  });

  struct Seed {
    cplx a, b;
  };
  std::vector<Seed> seeds;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i) {
      const double v = at(i, j);
      if (v < grid.coarse_tol && v <= at(i - 1, j) && v <= at(i + 1, j))
        seeds.push_back({cell(i - 1, j), cell(i + 1, j)});
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j + 1 < ny; ++j) {
      const double v = at(i, j);
      if (v < grid.coarse_tol && v <= at(i, j - 1) && v <= at(i, j + 1))
        seeds.push_back({cell(i, j - 1), cell(i, j + 1)});
    }

  const double tol_abs = 1e-14 * std::max(scale, std::abs(grid.center));
  std::vector<std::vector<GbzPoint>> found(seeds.size());
  parallel_for(seeds.size(), default_jobs(), [&](std::size_t s) {
    const cplx E = refine(model, seeds[s].a, seeds[s].b, tol_abs);
    const double res = gbz_residual(model, E);
    if (res < grid.residual_tol) add_middle_pair(model, E, res, found[s]);
  });
  for (auto& f : found) curve.points.insert(curve.points.end(), f.begin(), f.end());
  if (curve.points.empty())
    throw Error(ErrorKind::EmptyCurve, "no energy in the scan window satisfies the GBZ condition");
  finish(curve, grid);
  return curve;
}

ScalingFit collapse_scaling(const ModelFamily& family, const std::vector<double>& eps_list) {
  ScalingFit fit;
  for (const double eps : eps_list) {
    const LatticeModel model = family(eps);
    cplx center = collapse_energy(model);
    if (!principal_branch(center)) center = -center;
    double h = 1.5 * bloch_energy_scale(model);

    std::vector<GbzPoint> near;
    for (int level = 0; level < 24; ++level) {
      GridSpec g;
      g.center = center;
      g.half_width = h;
      g.n_re = g.n_im = 120;
      std::vector<GbzPoint> pts;
      try {
        pts = trace_gbz(model, g).points;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyCurve) throw;
        h /= 8.0;
        continue;
      }
      near.clear();
      double extent = 0.0;
      for (const auto& p : pts)
        if (std::abs(p.E - center) <= std::abs(p.E + center)) {
          near.push_back(p);
          extent = std::max(extent, std::abs(p.E - center));
        }
      if (near.empty()) {
        h /= 8.0;
        continue;
      }
      // Zoom until the band spans a tenth of the window.
      if (extent < h / 10.0 && extent > 1e-14 * std::abs(center)) h = 2.0 * extent;
      else break;
    }
    if (near.empty())
      throw Error(ErrorKind::EmptyCurve, "no non-Bloch band found near the collapse energy");

    double mean = 0.0;
    for (const auto& p : near) mean += std::abs(p.beta);
    mean /= static_cast<double>(near.size());
    const bool outside = mean > 1.0;
    double size = 0.0;
    for (const auto& p : near)
      size = std::max(size, outside ? 1.0 / std::abs(p.beta) : std::abs(p.beta));
    fit.samples.push_back({eps, size, near.size()});
  }

  const std::size_t n = fit.samples.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : fit.samples) {
    const double x = std::log(s.eps), y = std::log(s.size);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den <= 1e-12 * std::max(1.0, n * sxx))
    throw Error(ErrorKind::BadInput, "scaling fit needs at least two distinct eps values");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& s : fit.samples) {
    const double d = std::log(s.size) - (fit.intercept + fit.slope * std::log(s.eps));
    ss += d * d;
  }
  fit.fit_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace nonbloch
