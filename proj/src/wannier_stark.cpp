#include "nonbloch/wannier_stark.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "nonbloch/error.hpp"
#include "nonbloch/propagator.hpp"

namespace nonbloch {

namespace {

constexpr double kPi = std::numbers::pi;

void require_force(double F) {
  if (F == 0.0) throw Error(ErrorKind::ZeroForce, "force must be nonzero");
}

// Eigenvector of U for eigenvalue lam; picks the better conditioned of the two
// row-derived candidates.
Vec2 eigvec_2x2(const Mat2& U, cplx lam, int fallback) {
  const Vec2 v1(U(0, 1), lam - U(0, 0));
  const Vec2 v2(lam - U(1, 1), U(1, 0));
  const Vec2& v = v1.norm() >= v2.norm() ? v1 : v2;
  if (v.norm() <= 1e-300) return fallback == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  return v.normalized();
}

}  // namespace

cplx WsResult::ladder(int l, int s) const {
  return static_cast<double>(l) * F + static_cast<double>(s) * F * theta / (2.0 * kPi);
}

Mat2 monodromy(const LatticeModel& model, double F, int steps) {
  require_force(F);
  return transport(model, F, -kPi, kPi, steps);
}

double trace_contour_shift(const LatticeModel& model, double F, const Mat2& U_real, int steps) {
  require_force(F);
  (void)U_real;
  const int coarse = std::min(steps, 512);
  // Largest intermediate |W(k)|: the rounding error of the trace scales with it.
  auto cost = [&](double kappa) {
    double worst = 0.0;
    for (const Mat2& W : transport_path(model, F, -kPi, kPi, coarse, kappa)) {
      const double n = W.norm();
      if (!std::isfinite(n)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, n);
    }
    return std::log(worst);
  };
  const double c0 = cost(0.0);
  if (c0 < std::log(1e3)) return 0.0;
  double best = 0.0, best_cost = c0;
  // Walk outward from the real contour; ties keep the smaller shift.
  for (int j = 1; j <= 20; ++j)
    for (const int k : {-j, j}) {
      const double c = cost(k);
      if (c < best_cost - 1e-6) best = k, best_cost = c;
    }
  if (best == 0.0) return 0.0;
  constexpr double g = 0.6180339887498949;
  double lo = best - 1.0, hi = best + 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 20; ++it) {
    if (f1 <= f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = cost(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  if (cost(mid) < best_cost - 1e-6) best = mid;
  return best;
}

WsResult ws_solve(const LatticeModel& model, double F, int steps) {
  const Mat2 U = monodromy(model, F, steps);
  const double kappa = trace_contour_shift(model, F, U, steps);
  if (kappa == 0.0) return analyse_monodromy(U, F);
  const cplx tr = transport(model, F, -kPi, kPi, steps, kappa).trace();
  if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag())) return analyse_monodromy(U, F);
  WsResult r = analyse_monodromy(U, F, tr);
  r.kappa = kappa;
  return r;
}

WsResult analyse_monodromy(const Mat2& U, double F, std::optional<cplx> trace) {
  require_force(F);
  WsResult r;
  r.F = F;
  r.U = U;
  r.cos_theta = 0.5 * trace.value_or(r.U.trace());
  r.theta = std::acos(r.cos_theta);
  if (r.theta.real() < 0.0) r.theta = -r.theta;
  r.t_B = 2.0 * kPi / std::abs(F);
  r.t_WS = r.theta.real() > 0.0 ? kPi / r.theta.real() * r.t_B : std::numeric_limits<double>::infinity();

  const cplx lp = std::exp(cplx{0.0, -1.0} * r.theta);
  const cplx lm = std::exp(cplx{0.0, 1.0} * r.theta);
  const bool scalar = std::abs(r.U(0, 1)) + std::abs(r.U(1, 0)) + std::abs(r.U(0, 0) - r.U(1, 1)) == 0.0;
  r.eigvec[0] = eigvec_2x2(r.U, lp, 0);
  r.eigvec[1] = eigvec_2x2(r.U, lm, 1);
  if (scalar) {
    r.eigvec = {Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    r.Theta_overlap = 0.0;
  } else if (lp == lm) {
    r.Theta_overlap = 1.0;
  } else {
    r.Theta_overlap = std::min(1.0, std::abs(r.eigvec[0].dot(r.eigvec[1])));
  }
  r.defective = r.Theta_overlap > kDefectiveOverlap;
  return r;
}

cplx wkb_angle(const LatticeModel& model, double F) {
  require_force(F);
  return (2.0 * kPi / F) * std::sqrt(q_polynomial(model).at(0));
}

WkbAngle wkb_angle_both(const LatticeModel& model, double F, int samples) {
  require_force(F);
  if (samples < 2) throw Error(ErrorKind::BadSize, "need at least two quadrature samples");
  const LaurentPoly Q = q_polynomial(model);
  // Periodic trapezoid rule, following E_+ continuously from k = -pi.
  cplx sum{}, prev{};
  const double h = 2.0 * kPi / samples;
  for (int j = 0; j < samples; ++j) {
    cplx e = std::sqrt(Q.evaluate(std::polar(1.0, kPi - j * h)));
    if (j > 0 && std::abs(e + prev) < std::abs(e - prev)) e = -e;
    sum += e;
    prev = e;
  }
  return {wkb_angle(model, F), sum * h / F};
}

std::vector<double> resonance_forces(const LatticeModel& model, int n_max) {
  const cplx e0 = collapse_energy(model);
  if (!(e0.real() > 0.0) || e0.imag() != 0.0)
    std::cerr << "warning: collapse energy " << e0.real() << (e0.imag() < 0 ? "" : "+") << e0.imag()
              << "i is not real and positive; using its real part\n";
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(2.0 * e0.real() / n);
    out.push_back(-2.0 * e0.real() / n);
  }
  return out;
}

WsEigenstate ws_eigenstate(const LatticeModel& model, double F, int l, int branch, int n_first,
                           int n_last, int steps) {
  if (n_last < n_first) throw Error(ErrorKind::BadSize, "empty cell window");
  const WsResult ws = ws_solve(model, F, steps);
  if (ws.Theta_overlap >= kDefectiveOverlap)
    throw Error(ErrorKind::AtExceptionalPoint, "monodromy is defective; WS eigenstates coalesce");
  const int s = branch >= 0 ? 1 : -1;
  const Vec2 v0 = ws.eigvec[s > 0 ? 0 : 1];
  const auto W = transport_path(model, F, -kPi, kPi, steps);

  WsEigenstate st;
  st.l = l;
  st.branch = s;
  st.n_first = n_first;
  st.energy = ws.ladder(l, s);
  const cplx nu = static_cast<double>(s) * ws.theta / (2.0 * kPi) + static_cast<double>(l);
  const double h = 2.0 * kPi / steps;
  const int len = n_last - n_first + 1;
  st.a.assign(static_cast<std::size_t>(len), cplx{});
  st.b.assign(static_cast<std::size_t>(len), cplx{});
  // Integrand is periodic in k, so the trapezoid rule over the open grid is spectrally accurate.
  for (int j = 0; j < steps; ++j) {
    const double k = -kPi + j * h;
    const Vec2 psi = W[static_cast<std::size_t>(j)] * v0;
    const cplx base = std::exp(cplx{0.0, 1.0} * k * nu);
    for (int i = 0; i < len; ++i) {
      const cplx ph = base * std::polar(1.0, k * (n_first + i));
      st.a[static_cast<std::size_t>(i)] += psi(0) * ph;
      st.b[static_cast<std::size_t>(i)] += psi(1) * ph;
    }
  }
  double norm = 0.0;
  for (int i = 0; i < len; ++i) norm += std::norm(st.a[i]) + std::norm(st.b[i]);
  norm = std::sqrt(norm);
  if (norm == 0.0) throw Error(ErrorKind::ZeroVector, "eigenstate vanishes on the window");
  for (int i = 0; i < len; ++i) {
    st.a[i] /= norm;
    st.b[i] /= norm;
  }
  return st;
}

}  // namespace nonbloch
