#include "nonbloch/obc.hpp"

#include <complex>
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nonbloch/error.hpp"

namespace nonbloch {

namespace {

// Block (c, m) is the 2x2 coupling of cell c to cell m.
bool block_zero(const Eigen::MatrixXcd& H, int c, int m) {
  return H.block(2 * c, 2 * m, 2, 2).isZero(0.0);
}

enum class Triangular { None, Lower, Upper };

Triangular block_shape(const ObcChain& chain) {
  bool lower = true, upper = true;
  for (int c = 0; c < chain.N && (lower || upper); ++c)
    for (int d = 1; d <= chain.q; ++d) {
      if (c + d < chain.N && !block_zero(chain.H, c, c + d)) lower = false;
      if (c - d >= 0 && !block_zero(chain.H, c, c - d)) upper = false;
    }
  if (lower) return Triangular::Lower;
  if (upper) return Triangular::Upper;
  return Triangular::None;
}

bool by_real_then_imag(cplx x, cplx y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

// Null vector of the 2x2 block B - E.
Vec2 block_null_vector(const Mat2& B, cplx E) {
  Vec2 v(B(0, 1), E - B(0, 0));
  if (v.norm() == 0.0) v = Vec2(E - B(1, 1), B(1, 0));
  if (v.norm() == 0.0) v = Vec2(1.0, 0.0);
  return v.normalized();
}

// Inverse iteration on the unscaled matrix for eigenvectors whose
// back-transformed residual is poor (modes decaying against the gauge).
void polish(const Eigen::MatrixXcd& H, SpectrumResult& out, double hn) {
  const Eigen::Index n = H.rows();
  for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
    if (out.residuals[j] <= 1e-11) continue;
    const cplx shift = out.eigenvalues[j] + cplx{1e-13 * hn, 1e-13 * hn};
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(H - shift * Eigen::MatrixXcd::Identity(n, n));
    Eigen::VectorXcd v = out.eigenvectors.col(static_cast<Eigen::Index>(j));
    for (int it = 0; it < 3; ++it) {
      Eigen::VectorXcd x = lu.solve(v);
      if (!x.allFinite() || x.norm() == 0.0) break;
      x.normalize();
      const double r = (H * x - out.eigenvalues[j] * x).norm() / hn;
      if (r >= out.residuals[j]) break;
      v = x;
      out.residuals[j] = r;
    }
    out.eigenvectors.col(static_cast<Eigen::Index>(j)) = v;
  }
}

void fill_residuals(const Eigen::MatrixXcd& H, SpectrumResult& out) {
  const double hn = std::max(H.norm(), 1e-300);
  out.residuals.resize(out.eigenvalues.size());
  for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
    const auto v = out.eigenvectors.col(static_cast<Eigen::Index>(j));
    out.residuals[j] = (H * v - out.eigenvalues[j] * v).norm() / hn;
  }
}

// Log of the per-cell diagonal scaling r that minimises |S^-1 H S|_F with
// S = diag(r^c). Skin modes grow like r^c, so the rescaled matrix is close to
// normal and its eigenvalues are well conditioned.
double gauge_log_scale(const ObcChain& chain) {
  std::vector<double> w(static_cast<std::size_t>(2 * chain.q + 1), 0.0);
  for (int c = 0; c < chain.N; ++c)
    for (int d = -chain.q; d <= chain.q; ++d)
      if (d != 0 && c + d >= 0 && c + d < chain.N)
        w[static_cast<std::size_t>(d + chain.q)] += chain.H.block(2 * c, 2 * (c + d), 2, 2).squaredNorm();
  // f'(s) = sum_d 2 d w_d exp(2 d s) is increasing in s
  auto slope = [&](double s) {
    double acc = 0.0;
    for (int d = -chain.q; d <= chain.q; ++d) acc += d * w[static_cast<std::size_t>(d + chain.q)] * std::exp(2.0 * d * s);
    return acc;
  };
  double lo = -30.0, hi = 30.0;
  if (slope(lo) >= 0.0) return lo;
  if (slope(hi) <= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ObcChain build_obc_matrix(const LatticeModel& model, int N) {
  const int q = model.range();
  if (N < q + 1)
    throw Error(ErrorKind::BadSize, "open chain needs N >= q + 1 = " + std::to_string(q + 1) +
                                        " cells, got " + std::to_string(N));
  ObcChain chain{N, q, Eigen::MatrixXcd::Zero(2 * N, 2 * N)};
  auto& H = chain.H;
  for (int c = 0; c < N; ++c)
    for (int l = -q; l <= q; ++l) {
      const int m = c - l;
      if (m < 0 || m >= N) continue;
      H(2 * c, 2 * m) += model.rho(l);
      H(2 * c, 2 * m + 1) += model.theta(l);
      H(2 * c + 1, 2 * m) += model.phi(l);
      H(2 * c + 1, 2 * m + 1) -= model.rho(l);
    }
  return chain;
}

SpectrumResult obc_spectrum(const ObcChain& chain) {
  const int n = 2 * chain.N;
  SpectrumResult out;

  if (const Triangular shape = block_shape(chain); shape != Triangular::None) {
    const Mat2 B = chain.H.block(0, 0, 2, 2);
    Eigen::ComplexEigenSolver<Mat2> es(B, false);
    std::array<cplx, 2> ev{es.eigenvalues()(0), es.eigenvalues()(1)};
    std::sort(ev.begin(), ev.end(), by_real_then_imag);
    const int cell = shape == Triangular::Lower ? chain.N - 1 : 0;
    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    out.eigenvectors = Eigen::MatrixXcd::Zero(n, n);
    for (int s = 0; s < 2; ++s)
      for (int j = 0; j < chain.N; ++j) {
        const int col = s * chain.N + j;
        out.eigenvalues.push_back(ev[s]);
        out.eigenvectors.block(2 * cell, col, 2, 1) = block_null_vector(B, ev[s]);
      }
    fill_residuals(chain.H, out);
    return out;
  }

  const double s = gauge_log_scale(chain);
  Eigen::MatrixXcd A = chain.H;
  for (int c = 0; c < chain.N; ++c)
    for (int m = std::max(0, c - chain.q); m <= std::min(chain.N - 1, c + chain.q); ++m)
      A.block(2 * c, 2 * m, 2, 2) *= std::exp(s * (m - c));
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr(n, n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, A.data(), n, w.data(), nullptr, 1,
                                        vr.data(), n);
  if (info != 0)
    throw Error(ErrorKind::EigNonConvergence,
                "dense eigensolver failed (LAPACK info " + std::to_string(info) + ")");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return by_real_then_imag(w(x), w(y)); });
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues.push_back(w(order[static_cast<std::size_t>(j)]));
    out.eigenvectors.col(j) = vr.col(order[static_cast<std::size_t>(j)]);
  }
  // undo the scaling, referenced to the cell with the largest factor
  const int ref = s > 0.0 ? chain.N - 1 : 0;
  for (int c = 0; c < chain.N; ++c) out.eigenvectors.middleRows(2 * c, 2) *= std::exp(s * (c - ref));
  for (int j = 0; j < n; ++j) out.eigenvectors.col(j).normalize();
  fill_residuals(chain.H, out);
  polish(chain.H, out, std::max(chain.H.norm(), 1e-300));
  return out;
}

SkinMetrics skin_metrics(const Eigen::VectorXcd& vec, int N) {
  if (vec.size() != 2 * static_cast<Eigen::Index>(N))
    throw Error(ErrorKind::BadSize, "vector length does not match 2N");
  double total = 0.0, first = 0.0, sq = 0.0;
  for (int c = 0; c < N; ++c) {
    const double wn = std::norm(vec(2 * c)) + std::norm(vec(2 * c + 1));
    total += wn;
    first += (c + 1) * wn;
    sq += wn * wn;
  }
  if (total == 0.0) throw Error(ErrorKind::ZeroVector, "skin metrics of a zero vector");
  return {first / total, total * total / sq};
}

Eigen::VectorXcd collapse_eigenvector(const LatticeModel& model, int sign, int N) {
  const Side side = model.one_sided();
  if (side == Side::None)
    throw Error(ErrorKind::NotOneSided, "model has hopping in both directions");
  if (N < model.range() + 1)
    throw Error(ErrorKind::BadSize, "open chain needs N >= q + 1 cells");
  Mat2 B;
  B << model.rho(0), model.theta(0), model.phi(0), -model.rho(0);
  const cplx E = (sign >= 0 ? 1.0 : -1.0) * collapse_energy(model);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * N);
  const int cell = side == Side::Right ? N - 1 : 0;
  v.segment(2 * cell, 2) = block_null_vector(B, E);
  return v;
}

int geometric_multiplicity(const ObcChain& chain, cplx E, double rel_tol) {
  const Eigen::Index n = chain.H.rows();
  const Eigen::MatrixXcd M = chain.H - E * Eigen::MatrixXcd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> hsvd(chain.H);
  const double hnorm = hsvd.singularValues()(0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  int count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < rel_tol * hnorm) ++count;
  return count;
}

}  // namespace nonbloch
