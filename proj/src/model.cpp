#include "nonbloch/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nonbloch {

namespace {

double reduce_k(double k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(k + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  r -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back.
  if (r >= std::numbers::pi) r -= two_pi;
  return r;
}

bool all_zero(const std::vector<cplx>& v, int q, bool negative) {
  for (int l = 1; l <= q; ++l) {
    const int idx = negative ? q - l : q + l;
    if (v[static_cast<std::size_t>(idx)] != cplx{}) return false;
  }
  return true;
}

}  // namespace

LatticeModel::LatticeModel(int range) : q_(range) {
  if (range < 1) throw std::invalid_argument("hopping range q must be >= 1");
  const auto n = static_cast<std::size_t>(2 * range + 1);
  rho_.assign(n, cplx{});
  theta_.assign(n, cplx{});
  phi_.assign(n, cplx{});
}

cplx& LatticeModel::slot(std::vector<cplx>& v, int l) {
  if (l < -q_ || l > q_)
    throw std::out_of_range("coupling offset " + std::to_string(l) + " outside [-q, q]");
  return v[static_cast<std::size_t>(l + q_)];
}

bool LatticeModel::hermitian(double tol) const {
  for (int l = -q_; l <= q_; ++l) {
    if (std::abs(rho(-l) - std::conj(rho(l))) > tol) return false;
    if (std::abs(theta(-l) - std::conj(phi(l))) > tol) return false;
  }
  return true;
}

Side LatticeModel::one_sided() const {
  const bool neg_zero = all_zero(rho_, q_, true) && all_zero(theta_, q_, true) &&
                        all_zero(phi_, q_, true);
  if (neg_zero) return Side::Right;
  const bool pos_zero = all_zero(rho_, q_, false) && all_zero(theta_, q_, false) &&
                        all_zero(phi_, q_, false);
  return pos_zero ? Side::Left : Side::None;
}

LatticeModel LatticeModel::mirrored() const {
  LatticeModel m(q_);
  for (int l = -q_; l <= q_; ++l) {
    m.set_rho(-l, rho(l));
    m.set_theta(-l, theta(l));
    m.set_phi(-l, phi(l));
  }
  return m;
}

double LatticeModel::max_coupling() const {
  double m = 0.0;
  for (const auto* v : {&rho_, &theta_, &phi_})
    for (const cplx& c : *v) m = std::max(m, std::abs(c));
  return m;
}

LatticeModel example_model(double delta_big, double t0, double t, double delta) {
  LatticeModel m(1);
  m.set_rho(0, delta_big);
  m.set_theta(0, t0);
  m.set_phi(0, t0);
  m.set_theta(1, t + delta);
  m.set_phi(-1, t - delta);
  return m;
}

Mat2 bloch_matrix(const LatticeModel& model, cplx beta) {
  const int q = model.range();
  cplx z{}, up{}, down{};
  // beta^l for l = -q..q, accumulated outward from l = 0.
  cplx pos = 1.0, neg = 1.0;
  z += model.rho(0);
  up += model.theta(0);
  down += model.phi(0);
  for (int l = 1; l <= q; ++l) {
    pos *= beta;
    neg /= beta;
    z += model.rho(l) * pos + model.rho(-l) * neg;
    up += model.theta(l) * pos + model.theta(-l) * neg;
    down += model.phi(l) * pos + model.phi(-l) * neg;
  }
  Mat2 h;
  h << z, up, down, -z;
  return h;
}

BlochSample bloch_hamiltonian(const LatticeModel& model, double k) {
  BlochSample s;
  s.k = reduce_k(k);
  const int q = model.range();
  const cplx i{0.0, 1.0};
  cplx dx{}, dy{}, dz{};
  for (int n = -q; n <= q; ++n) {
    const cplx ph = std::exp(-i * (s.k * n));
    dx += 0.5 * (model.theta(n) + model.phi(n)) * ph;
    dy += (model.phi(n) - model.theta(n)) * ph / (2.0 * i);
    dz += model.rho(n) * ph;
  }
  s.d = {dx, dy, dz};
  s.H << dz, dx - i * dy, dx + i * dy, -dz;
  s.e_plus = std::sqrt(dx * dx + dy * dy + dz * dz);
  s.e_minus = -s.e_plus;
  return s;
}

cplx LaurentPoly::evaluate(cplx beta) const {
  // Horner on beta^{2q} Q(beta), then divide out.
  cplx acc{};
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * beta + *it;
  return acc / std::pow(beta, 2 * q);
}

LaurentPoly q_polynomial(const LatticeModel& model) {
  const int q = model.range();
  LaurentPoly p;
  p.q = q;
  p.coeff.assign(static_cast<std::size_t>(4 * q + 1), cplx{});
  for (int l = -q; l <= q; ++l)
    for (int n = -q; n <= q; ++n)
      p.coeff[static_cast<std::size_t>(l + n + 2 * q)] +=
          model.rho(l) * model.rho(n) + model.theta(l) * model.phi(n);
  return p;
}

cplx collapse_energy(const LatticeModel& model) {
  return std::sqrt(model.rho(0) * model.rho(0) + model.phi(0) * model.theta(0));
}

double bloch_energy_scale(const LatticeModel& model, int samples) {
  double m = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * j / samples;
    m = std::max(m, std::abs(bloch_hamiltonian(model, k).e_plus));
  }
  return m;
}

}  // namespace nonbloch
