#include "nonbloch/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nonbloch/error.hpp"

namespace nonbloch {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eval {
  cplx ratio;   // p(z) / p'(z)
  double abs_p; // |p(z)|
  double bound; // sum_k |a_k| |z|^k
};

// Horner evaluation of p and p'/p, switching to the reversed polynomial for
// |z| > 1 so that large roots keep their relative accuracy.
Eval evaluate(std::span<const cplx> a, cplx z) {
  const int n = static_cast<int>(a.size()) - 1;
  const double r = std::abs(z);
  Eval e{};
  if (r <= 1.0) {
    cplx p = a[n], dp = 0.0;
    double b = std::abs(a[n]);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
      b = b * r + std::abs(a[k]);
    }
    e.abs_p = std::abs(p);
    e.bound = b;
    e.ratio = (dp == cplx{}) ? cplx{kInf, 0.0} : p / dp;
    return e;
  }
  // p(z) = z^n rev(y) with y = 1/z and rev(y) = sum_k a_{n-k} y^k.
  const cplx y = 1.0 / z;
  const double ry = 1.0 / r;
  cplx rv = a[0], drv = 0.0;
  double b = std::abs(a[0]);
  for (int k = 1; k <= n; ++k) {
    drv = drv * y + rv;
    rv = rv * y + a[k];
    b = b * ry + std::abs(a[k]);
  }
  const double scale = std::pow(r, n);
  e.abs_p = std::abs(rv) * scale;
  e.bound = b * scale;
  // p'/p = (n - y rev'(y)/rev(y)) / z
  const cplx denom = static_cast<double>(n) - y * drv / rv;
  e.ratio = (rv == cplx{}) ? cplx{} : z / denom;
  return e;
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|a_k|), the Newton-polygon estimate of the root moduli.
std::vector<cplx> initial_guesses(std::span<const cplx> a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> hull;
  std::vector<double> lg(a.size());
  for (int k = 0; k <= n; ++k)
    lg[k] = a[k] == cplx{} ? -kInf : std::log(std::abs(a[k]));
  for (int k = 0; k <= n; ++k) {
    if (lg[k] == -kInf) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2], j = hull.back();
      // drop j if it lies on or below the segment i -> k
      if ((lg[j] - lg[i]) * (k - i) <= (lg[k] - lg[i]) * (j - i)) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<cplx> z;
  z.reserve(static_cast<std::size_t>(n));
  constexpr double sigma = 0.7;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int k0 = hull[h], k1 = hull[h + 1];
    const int m = k1 - k0;
    const double u = std::exp((lg[k0] - lg[k1]) / m);
    for (int i = 0; i < m; ++i) {
      const double ang = 2.0 * std::numbers::pi * (static_cast<double>(i) / m +
                                                   static_cast<double>(k0) / n) + sigma;
      z.push_back(std::polar(u, ang));
    }
  }
  return z;
}

std::vector<cplx> aberth(std::span<const cplx> a, const RootOptions& opts) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 1) return {-a[0] / a[1]};
  std::vector<cplx> z = initial_guesses(a);
  std::vector<bool> done(z.size(), false);
  int remaining = n;
  for (int it = 0; it < opts.max_iterations && remaining > 0; ++it) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Eval e = evaluate(a, z[i]);
      if (e.abs_p <= 4.0 * n * kEps * e.bound) {
        done[i] = true;
        --remaining;
        continue;
      }
      cplx s{};
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const bool finite_ratio = std::isfinite(e.ratio.real()) && std::isfinite(e.ratio.imag());
      // p' = 0 at z_i: the Aberth correction tends to -1/s.
      const cplx w = finite_ratio ? e.ratio / (1.0 - e.ratio * s)
                                  : (s != cplx{} ? -1.0 / s : cplx{1e-3 * (1.0 + std::abs(z[i])), 0.0});
      z[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0)
    throw Error(ErrorKind::NonConvergence,
                "Aberth iteration did not converge within " + std::to_string(opts.max_iterations) +
                    " sweeps (degree " + std::to_string(n) + ")");
  // One Newton step per root, kept only when it lowers |p|.
  for (auto& zi : z) {
    const Eval e = evaluate(a, zi);
    if (!std::isfinite(e.ratio.real()) || !std::isfinite(e.ratio.imag())) continue;
    const cplx cand = zi - e.ratio;
    if (evaluate(a, cand).abs_p < e.abs_p) zi = cand;
  }
  return z;
}

bool modulus_less(cplx x, cplx y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax != ay) return ax < ay;
  return std::arg(x) < std::arg(y);
}

}  // namespace

double RootSet::modulus(int i) const {
  return i < static_cast<int>(roots.size()) ? std::abs(roots[static_cast<std::size_t>(i)]) : kInf;
}

cplx RootSet::root(int i) const {
  return i < static_cast<int>(roots.size()) ? roots[static_cast<std::size_t>(i)] : cplx{kInf, 0.0};
}

std::vector<cplx> char_poly_coeffs(const LatticeModel& model, cplx E) {
  auto c = q_polynomial(model).coeff;
  c[static_cast<std::size_t>(2 * model.range())] -= E * E;
  return c;
}

RootSet polynomial_roots(std::span<const cplx> coeffs, const RootOptions& opts) {
  std::size_t lo = 0, hi = coeffs.size();
  while (lo < hi && coeffs[lo] == cplx{}) ++lo;
  if (lo == hi) throw Error(ErrorKind::DegenerateAllZero, "characteristic polynomial vanishes identically");
  while (hi > lo && coeffs[hi - 1] == cplx{}) --hi;

  RootSet rs;
  rs.overflow = static_cast<int>(coeffs.size() - hi);
  rs.roots.assign(lo, cplx{});
  const auto core = coeffs.subspan(lo, hi - lo);
  if (core.size() > 1) {
    auto finite = aberth(core, opts);
    rs.roots.insert(rs.roots.end(), finite.begin(), finite.end());
  }
  std::sort(rs.roots.begin(), rs.roots.end(), modulus_less);
  rs.residuals.reserve(rs.roots.size());
  for (const cplx& z : rs.roots) {
    const Eval e = evaluate(coeffs.subspan(0, hi), z);
    rs.residuals.push_back(e.bound > 0.0 ? e.abs_p / e.bound : 0.0);
  }
  return rs;
}

RootSet sorted_roots(const LatticeModel& model, cplx E, const RootOptions& opts) {
  const auto c = char_poly_coeffs(model, E);
  RootSet rs = polynomial_roots(c, opts);
  rs.E = E;
  return rs;
}

}  // namespace nonbloch
