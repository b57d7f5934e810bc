#pragma once

// Two-band chiral lattice with hoppings up to q unit cells.
//
// Couplings are stored densely on l = -q..q. Conventions follow the
// Wannier-basis equations of motion
//
//   i da_n/dt = sum_l rho_l a_{n-l} + sum_l theta_l b_{n-l}
//   i db_n/dt = sum_l phi_l a_{n-l} - sum_l rho_l b_{n-l}
//
// so that with beta = exp(-ik) the Bloch Hamiltonian reads
//   H(k) = [[ sum rho_l beta^l,   sum theta_l beta^l ],
//           [ sum phi_l beta^l,  -sum rho_l beta^l   ]].
//
// Energies carry whatever unit the couplings are given in; the figure
// recipes use t = 1.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <span>
#include <vector>

namespace nonbloch {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

enum class Side { None, Right, Left };

class LatticeModel {
 public:
  explicit LatticeModel(int range);

  int range() const noexcept { return q_; }

  // Out-of-range offsets read as zero.
  cplx rho(int l) const noexcept { return get(rho_, l); }
  cplx theta(int l) const noexcept { return get(theta_, l); }
  cplx phi(int l) const noexcept { return get(phi_, l); }

  // Throws std::out_of_range for |l| > q.
  void set_rho(int l, cplx v) { slot(rho_, l) = v; }
  void set_theta(int l, cplx v) { slot(theta_, l) = v; }
  void set_phi(int l, cplx v) { slot(phi_, l) = v; }

  // Dense views indexed by l + q.
  std::span<const cplx> rho_coeffs() const noexcept { return rho_; }
  std::span<const cplx> theta_coeffs() const noexcept { return theta_; }
  std::span<const cplx> phi_coeffs() const noexcept { return phi_; }

  // rho_{-l} = conj(rho_l) and theta_{-l} = conj(phi_l) for all l.
  bool hermitian(double tol = 1e-14) const;

  // Right when every coupling with l < 0 vanishes exactly, Left when every
  // coupling with l > 0 does. A model without any hopping reports Right.
  Side one_sided() const;

  // Spatial reflection n -> -n, i.e. every coupling moved from l to -l.
  LatticeModel mirrored() const;

  // Largest coupling magnitude; a natural energy scale for tolerances.
  double max_coupling() const;

 private:
  cplx get(const std::vector<cplx>& v, int l) const noexcept {
    return (l < -q_ || l > q_) ? cplx{} : v[static_cast<std::size_t>(l + q_)];
  }
  cplx& slot(std::vector<cplx>& v, int l);

  int q_;
  std::vector<cplx> rho_, theta_, phi_;
};

// rho_0 = Delta, theta_0 = phi_0 = t0, theta_1 = t + delta, phi_{-1} = t - delta.
LatticeModel example_model(double delta_big, double t0, double t, double delta);

struct BlochSample {
  double k = 0.0;                 // reduced into [-pi, pi)
  std::array<cplx, 3> d{};        // d_x, d_y, d_z
  Mat2 H = Mat2::Zero();
  cplx e_plus;                    // principal sqrt of Q(exp(-ik))
  cplx e_minus;
};

BlochSample bloch_hamiltonian(const LatticeModel& model, double k);

// H(k) evaluated at a complex beta (beta = exp(-ik) on the Brillouin zone).
Mat2 bloch_matrix(const LatticeModel& model, cplx beta);

// Q(beta) = sum_m c_m beta^m with m in [-2q, 2q].
struct LaurentPoly {
  int q = 1;
  std::vector<cplx> coeff;  // index m + 2q

  cplx at(int m) const noexcept {
    return (m < -2 * q || m > 2 * q) ? cplx{} : coeff[static_cast<std::size_t>(m + 2 * q)];
  }
  cplx evaluate(cplx beta) const;
};

LaurentPoly q_polynomial(const LatticeModel& model);

// Principal sqrt(rho_0^2 + phi_0 theta_0).
cplx collapse_energy(const LatticeModel& model);

// Largest |E_+(k)| over the periodic Brillouin zone, sampled on `samples` points.
double bloch_energy_scale(const LatticeModel& model, int samples = 720);

}  // namespace nonbloch
