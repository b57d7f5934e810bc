#include "nonbloch/propagator.hpp"

#include <Eigen/LU>
#include <cmath>

#include "nonbloch/error.hpp"

namespace nonbloch {

namespace {

struct Stepper {
  const LatticeModel& model;
  double F;
  double kappa;

  Mat2 generator(double k) const {
    return cplx{0.0, -1.0 / F} * bloch_matrix(model, std::polar(std::exp(kappa), -k));
  }

  // Sixth-order Magnus step on three Gauss points.
  Mat2 step(double k, double h) const {
    static const double c = std::sqrt(15.0) / 10.0;
    const Mat2 A1 = generator(k + (0.5 - c) * h);
    const Mat2 A2 = generator(k + 0.5 * h);
    const Mat2 A3 = generator(k + (0.5 + c) * h);
    const Mat2 a1 = h * A2;
    const Mat2 a2 = (std::sqrt(15.0) / 3.0 * h) * (A3 - A1);
    const Mat2 a3 = (10.0 / 3.0 * h) * (A3 - 2.0 * A2 + A1);
    const Mat2 c1 = comm(a1, a2);
    const Mat2 c2 = (-1.0 / 60.0) * comm(a1, 2.0 * a3 + c1);
    const Mat2 omega = a1 + a3 / 12.0 + comm(-20.0 * a1 - a3 + c1, a2 + c2) / 240.0;
    return expm_traceless(omega);
  }

  static Mat2 comm(const Mat2& x, const Mat2& y) { return x * y - y * x; }
};

void check(double F, int steps) {
  if (F == 0.0) throw Error(ErrorKind::ZeroForce, "force must be nonzero");
  if (steps < 1) throw Error(ErrorKind::BadSize, "need at least one integration step");
}

}  // namespace

Mat2 expm_traceless(const Mat2& M) {
  const cplx mu2 = -M.determinant();
  const cplx mu = std::sqrt(mu2);
  cplx ch, sh;
  if (std::abs(mu) < 1e-4) {
    // Taylor series; both functions are even in mu.
    ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0 + mu2 * mu2 * mu2 / 720.0;
    sh = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0 + mu2 * mu2 * mu2 / 5040.0;
  } else {
    ch = std::cosh(mu);
    sh = std::sinh(mu) / mu;
  }
  return ch * Mat2::Identity() + sh * M;
}

Mat2 transport(const LatticeModel& model, double F, double k_start, double k_end, int steps, double kappa) {
  check(F, steps);
  const Stepper st{model, F, kappa};
  const double h = (k_end - k_start) / steps;
  Mat2 W = Mat2::Identity();
  for (int j = 0; j < steps; ++j) W = st.step(k_start + j * h, h) * W;
  return W;
}

std::vector<Mat2> transport_path(const LatticeModel& model, double F, double k_start, double k_end,
                                 int steps, double kappa) {
  check(F, steps);
  const Stepper st{model, F, kappa};
  const double h = (k_end - k_start) / steps;
  std::vector<Mat2> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(Mat2::Identity());
  for (int j = 0; j < steps; ++j) out.push_back(st.step(k_start + j * h, h) * out.back());
  return out;
}

}  // namespace nonbloch
